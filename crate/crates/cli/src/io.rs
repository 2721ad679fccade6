//! Reading and writing structures and coalgebras.

use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{bail, Context, Result};
use fvm_core::coalgebras::Coalgebra;
use fvm_core::comonads::Params;
use fvm_core::structures::{structure_from_value, structure_to_value};
use fvm_core::{Structure, StructureMap};
use serde_json::{json, Map, Value};

pub fn read_json(path: &Path) -> Result<Value> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_slice(&bytes).with_context(|| format!("parsing {}", path.display()))
}

pub fn read_structure(path: &Path) -> Result<Structure> {
    let value = read_json(path)?;
    structure_from_value(&value).with_context(|| format!("reading a structure from {}", path.display()))
}

pub fn read_structures(paths: &[impl AsRef<Path>]) -> Result<Vec<Structure>> {
    paths.iter().map(|p| read_structure(p.as_ref())).collect()
}

/// Writes `value` to `path`, or prints it when no path is given.
pub fn emit(value: &Value, path: Option<&Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    match path {
        Some(p) => fs::write(p, text + "\n").with_context(|| format!("writing {}", p.display())),
        None => {
            let mut out = std::io::stdout().lock();
            match writeln!(out, "{text}").and_then(|()| out.flush()) {
                // A closed pipe (e.g. `| head`) is not an error.
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
                _ => Ok(()),
            }
        }
    }
}

/// Keys added to a structure object by the coalgebra encoding.
const COALGEBRA_KEYS: [&str; 8] = [
    "alpha",
    "legend",
    "elements",
    "kind",
    "k",
    "law",
    "composite",
    "universal",
];

/// A coalgebra file: a structure object with `"alpha"`, the carrier index of
/// `α(x)` for every element `x`. Files without `"alpha"` are read as the
/// cofree coalgebra on the structure.
pub fn read_coalgebra(path: &Path, params: Params) -> Result<Coalgebra> {
    let value = read_json(path)?;
    let Some(obj) = value.as_object() else {
        bail!("{}: expected an object", path.display())
    };
    let mut structure = Map::new();
    for (key, v) in obj {
        if !COALGEBRA_KEYS.contains(&key.as_str()) {
            structure.insert(key.clone(), v.clone());
        }
    }
    let base = structure_from_value(&Value::Object(structure))
        .with_context(|| format!("reading the base structure of {}", path.display()))?;
    let comonad = params.build(&base)?;
    match obj.get("alpha") {
        None => Ok(fvm_core::coalgebras::cofree(&comonad)?),
        Some(alpha) => {
            let table: Vec<u32> = serde_json::from_value(alpha.clone())
                .with_context(|| format!("{}: alpha must be an array of carrier indices", path.display()))?;
            if let Some(&bad) = table.iter().find(|&&i| i as usize >= comonad.size()) {
                bail!(
                    "{}: alpha entry {bad} is outside the carrier of size {}",
                    path.display(),
                    comonad.size()
                );
            }
            Ok(Coalgebra::from_map(&comonad, &StructureMap::new(table))?)
        }
    }
}

/// The coalgebra encoding read by [`read_coalgebra`], with the element
/// names of the base and the carrier legend for reference.
pub fn coalgebra_value(c: &Coalgebra) -> Result<Value> {
    let (comonad, alpha) = c.materialize()?;
    let mut value = structure_to_value(&c.base.structure);
    let obj = value.as_object_mut().expect("structure values are objects");
    obj.insert("kind".into(), json!(c.params.kind));
    obj.insert("k".into(), json!(c.params.k));
    obj.insert("alpha".into(), json!(alpha.table));
    obj.insert(
        "elements".into(),
        json!(c.base.labels().iter().map(|t| t.to_string()).collect::<Vec<_>>()),
    );
    obj.insert("legend".into(), json!(comonad.legend()));
    Ok(value)
}
