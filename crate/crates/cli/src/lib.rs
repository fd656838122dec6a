//! Library half of the `nilrad` binary: sweep configs and manifests.

pub mod sweep;
