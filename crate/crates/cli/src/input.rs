use std::path::Path;

use mosaic_core::format::{parse_point_file, point_set_from_file};
use mosaic_core::ingest::{from_parsed, normalize};
use mosaic_core::{PointSet, Unit};

use crate::CliError;

/// One input file, in its native units and on the unit domain.
pub struct LoadedSet {
    pub label: String,
    /// Native units; regularity statistics are reported from this set.
    pub native: PointSet,
    /// Longer side mapped to one; PCF and spectra are computed from this set.
    pub unit: PointSet,
}

pub fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::File {
        path: path.to_owned(),
        source,
    })
}

pub fn load(path: &Path, scale: f64) -> Result<LoadedSet, CliError> {
    let text = read_text(path)?;
    let file = parse_point_file(&text)?;
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "input".to_owned());

    if let Some(native) = point_set_from_file::<f64>(&file, &stem)? {
        let d = native.domain();
        let unit = if d.width() == 1.0 && d.height() == 1.0 {
            native.clone()
        } else {
            let rec = mosaic_core::MosaicRecord {
                source_label: native.label().to_owned(),
                pointset: native.clone(),
                scale_factor: 1.0,
                crop: None,
            };
            normalize(&rec)?.pointset
        };
        return Ok(LoadedSet {
            label: native.label().to_owned(),
            native,
            unit,
        });
    }

    let unit_kind = file.header.unit.unwrap_or(Unit::Micrometers);
    let rec = from_parsed::<f64>(&file, scale, unit_kind, &stem)?;
    let unit = normalize(&rec)?.pointset;
    Ok(LoadedSet {
        label: rec.source_label.clone(),
        native: rec.pointset,
        unit,
    })
}
