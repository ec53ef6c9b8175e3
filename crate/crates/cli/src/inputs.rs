use std::fs;

use pfl_core::{BodyRegionTable, ManipulatorModel};

use crate::args::Cli;
use crate::manifest::{FileDigest, RunManifest};
use crate::CliResult;

fn read(path: &std::path::Path) -> CliResult<Vec<u8>> {
    fs::read(path)
        .map_err(|e| pfl_core::Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))).into())
}

pub fn body_table(cli: &Cli, manifest: &mut RunManifest) -> CliResult<BodyRegionTable> {
    match &cli.body_table {
        Some(path) => {
            let bytes = read(path)?;
            manifest.input(FileDigest::of_bytes(path.display().to_string(), &bytes));
            Ok(BodyRegionTable::load(bytes.as_slice(), path.display().to_string())?)
        }
        None => {
            let text = BodyRegionTable::reference_csv();
            manifest.input(FileDigest::of_bytes("builtin:body_regions", text.as_bytes()));
            Ok(BodyRegionTable::reference())
        }
    }
}

pub fn robot(cli: &Cli, manifest: &mut RunManifest) -> CliResult<ManipulatorModel> {
    match &cli.robot {
        Some(path) => {
            let bytes = read(path)?;
            manifest.input(FileDigest::of_bytes(path.display().to_string(), &bytes));
            Ok(ManipulatorModel::load(bytes.as_slice())?)
        }
        None => {
            let text = ManipulatorModel::reference_toml();
            manifest.input(FileDigest::of_bytes("builtin:robot", text.as_bytes()));
            Ok(ManipulatorModel::reference())
        }
    }
}

/// Read a config file and record it as an input.
pub fn config_text(path: &std::path::Path, manifest: &mut RunManifest) -> CliResult<String> {
    let bytes = read(path)?;
    manifest.input(FileDigest::of_bytes(path.display().to_string(), &bytes));
    String::from_utf8(bytes).map_err(|_| pfl_core::Error::Schema(format!("{} is not UTF-8", path.display())).into())
}

pub fn out_dir(cli: &Cli) -> CliResult<&std::path::Path> {
    fs::create_dir_all(&cli.out)?;
    Ok(&cli.out)
}
