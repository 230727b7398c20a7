//! Built-in presets, compiled into the binary.

use super::LoadError;

pub struct Preset {
    pub name: &'static str,
    pub description: &'static str,
    pub source: &'static str,
}

pub const PRESETS: [Preset; 4] = [
    Preset {
        name: "qplane",
        description: "quantum plane xy = qyx, two-parameter calculus, surjective hom-connection",
        source: include_str!("../../presets/qplane.ncf"),
    },
    Preset {
        name: "sl2-3d",
        description: "O_q(SL(2)) with the 3D calculus, flat hom-connection, Haar integral",
        source: include_str!("../../presets/sl2-3d.ncf"),
    },
    Preset {
        name: "podles-sphere",
        description: "degree-zero subalgebra of O_q(SL(2)) with the descended hom-connection",
        source: concat!(include_str!("../../presets/sl2-3d.ncf"), "\n", include_str!("../../fixtures/sphere_sweedler.txt")),
    },
    Preset {
        name: "matrix-m2",
        description: "M_2 with the Pauli inner derivations, Koszul calculus, trace integral",
        source: include_str!("../../presets/matrix-m2.ncf"),
    },
];

pub fn preset(name: &str) -> Option<&'static Preset> {
    let name = if name == "sl2" { "sl2-3d" } else { name };
    PRESETS.iter().find(|p| p.name == name)
}

/// Resolves `preset:NAME` or a path; returns a label and the text.
pub fn load_source(arg: &str) -> Result<(String, String), LoadError> {
    if let Some(name) = arg.strip_prefix("preset:") {
        let p = preset(name).ok_or_else(|| LoadError::UnknownPreset(name.to_string()))?;
        return Ok((p.name.to_string(), p.source.to_string()));
    }
    let text = std::fs::read_to_string(arg).map_err(|e| LoadError::Io(arg.to_string(), e.to_string()))?;
    Ok((arg.to_string(), text))
}
