use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Kodaira class of the smoothing, for chain-length bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SurfaceClass {
    K3,
    ProperlyElliptic,
    GeneralType { k2_min: i64 },
}

/// Maximal length of a single Wahl chain on a surface with `K² = k2`.
pub fn length_bound(class: SurfaceClass, k2: i64) -> Result<i64> {
    if k2 <= 0 {
        return Err(Error::NonPositiveK2(k2));
    }
    Ok(match class {
        SurfaceClass::K3 => 4 * k2 + 1,
        SurfaceClass::ProperlyElliptic => 4 * k2 - 1,
        SurfaceClass::GeneralType { k2_min } => {
            let delta = k2 - k2_min;
            if delta > 1 {
                4 * delta - 3
            } else {
                2
            }
        }
    })
}
