//! JSON configuration files: `{"ambient"?, "curves": [{"name", "self_int"}], "nodes": [[a, b], ...]}`.

use serde::{Deserialize, Serialize};

use super::configuration::{Ambient, Configuration, Origin};
use crate::error::{Error, Pos, Result};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    ambient: Option<AmbientSpec>,
    curves: Vec<CurveSpec>,
    nodes: Vec<[String; 2]>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum AmbientSpec {
    Named(NamedAmbient),
    Abstract(AbstractAmbient),
}

#[derive(Debug, Serialize, Deserialize)]
enum NamedAmbient {
    K3,
    Enriques,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AbstractAmbient {
    k2: i64,
    chi_top: i64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CurveSpec {
    name: String,
    self_int: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    exceptional: Option<u32>,
}

/// Parses a configuration file. A missing `ambient` means K3.
pub fn parse_configuration(text: &str) -> Result<Configuration> {
    let file: ConfigFile = serde_json::from_str(text).map_err(|e| Error::Parse {
        what: "configuration",
        pos: Pos { line: e.line(), col: e.column() },
        msg: e.to_string(),
    })?;
    let ambient = match file.ambient {
        None | Some(AmbientSpec::Named(NamedAmbient::K3)) => Ambient::K3,
        Some(AmbientSpec::Named(NamedAmbient::Enriques)) => Ambient::Enriques,
        Some(AmbientSpec::Abstract(a)) => Ambient::Abstract { k2: a.k2, chi_top: a.chi_top },
    };
    let mut cfg = Configuration::new(ambient);
    let mut exceptional = Vec::new();
    for c in &file.curves {
        let id = cfg.add_curve(&c.name, c.self_int)?;
        if let Some(step) = c.exceptional {
            exceptional.push((id, step));
        }
    }
    for [a, b] in &file.nodes {
        let (a, b) = (cfg.id_of(a)?, cfg.id_of(b)?);
        cfg.add_node(a, b)?;
    }
    Ok(cfg.with_origins(&exceptional))
}

/// Emits the file format with one curve or node per line; `parse_configuration` inverts it.
pub fn emit_configuration(cfg: &Configuration) -> String {
    let mut out = String::from("{\n");
    let ambient = match cfg.ambient() {
        Ambient::K3 => "\"K3\"".to_string(),
        Ambient::Enriques => "\"Enriques\"".to_string(),
        Ambient::Abstract { k2, chi_top } => format!("{{\"k2\": {k2}, \"chi_top\": {chi_top}}}"),
    };
    out.push_str(&format!("  \"ambient\": {ambient},\n  \"curves\": [\n"));
    let curves: Vec<String> = cfg
        .curves()
        .iter()
        .map(|c| {
            let name = serde_json::to_string(&c.name).expect("string");
            match c.origin {
                Origin::Base => format!("    {{\"name\": {name}, \"self_int\": {}}}", c.self_int),
                Origin::Exceptional(s) => {
                    format!("    {{\"name\": {name}, \"self_int\": {}, \"exceptional\": {s}}}", c.self_int)
                }
            }
        })
        .collect();
    out.push_str(&curves.join(",\n"));
    out.push_str("\n  ],\n  \"nodes\": [\n");
    let nodes: Vec<String> = cfg
        .nodes()
        .iter()
        .map(|n| {
            let (a, b) = n.curves();
            let q = |c| serde_json::to_string(cfg.name(c)).expect("string");
            format!("    [{}, {}]", q(a), q(b))
        })
        .collect();
    out.push_str(&nodes.join(",\n"));
    out.push_str("\n  ]\n}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let text = r#"{"curves": [{"name": "X", "self_int": -2}, {"name": "Y", "self_int": -4}], "nodes": [["X","Y"],["X","Y"]]}"#;
        let c = parse_configuration(text).unwrap();
        assert_eq!(c.r(), 2);
        assert_eq!(c.t2(), 2);
        let emitted = emit_configuration(&c);
        let c2 = parse_configuration(&emitted).unwrap();
        assert_eq!(emit_configuration(&c2), emitted);
        let blown = c.blow_up(c.nodes()[0].id).unwrap();
        let e = emit_configuration(&blown);
        assert_eq!(emit_configuration(&parse_configuration(&e).unwrap()), e);
    }

    #[test]
    fn rejects_unknown_fields_and_names() {
        assert!(parse_configuration(r#"{"curves": [], "nodes": [], "extra": 1}"#).is_err());
        assert!(parse_configuration(r#"{"curves": [{"name":"X","self_int":-2,"genus":0}], "nodes": []}"#).is_err());
        assert!(parse_configuration(r#"{"curves": [{"name":"X","self_int":-2}], "nodes": [["X","Z"]]}"#).is_err());
        assert!(parse_configuration(
            r#"{"curves": [{"name":"X","self_int":-2},{"name":"X","self_int":-2}], "nodes": []}"#
        )
        .is_err());
    }

    #[test]
    fn reports_position() {
        match parse_configuration("{\n  \"curves\": [,]\n}") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos.line, 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn ambient_variants() {
        let c = parse_configuration(r#"{"ambient": "Enriques", "curves": [], "nodes": []}"#).unwrap();
        assert_eq!(c.log_chern(), (0, 12));
        let c = parse_configuration(r#"{"ambient": {"k2": 1, "chi_top": 11}, "curves": [], "nodes": []}"#).unwrap();
        assert_eq!(c.pk_invariants(), (0, 1));
    }
}
