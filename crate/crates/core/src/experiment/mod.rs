//! Batch layer: run configurations, named presets and persisted runs.

mod config;
mod presets;
mod run;

pub use config::{
    apply_override, CheckName, CheckOptions, EigenOptions, Method, RunConfig, TransformKind,
    TransformOptions,
};
pub use presets::{find_preset, preset_names, presets, Expectation, Preset, PresetInfo};
pub use run::{
    execute, exit_code_for, run, Artifact, Command, Execution, Provenance, RunManifest, RunStatus,
    MANIFEST_FILE,
};
