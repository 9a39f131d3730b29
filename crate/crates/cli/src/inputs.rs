//! Loading networks, alphabets and target functions from command-line specs.

use std::path::Path;

use anyhow::{bail, Context, Result};
use netcomp::algebra::Algebra;
use netcomp::functions::TargetFunction;
use netcomp::network::{standard, Network};

/// A network file, or one of the built-in names `line`, `direct-pair`,
/// `reverse-butterfly` and `relay:<s>`.
pub fn network(spec: &str) -> Result<Network> {
    let path = Path::new(spec);
    if path.exists() {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {spec}"))?;
        return Network::parse(&text).with_context(|| format!("parsing {spec}"));
    }
    Ok(match spec {
        "line" => standard::line(),
        "direct-pair" => standard::direct_pair(),
        "reverse-butterfly" => standard::reverse_butterfly(),
        _ => match spec.strip_prefix("relay:").map(str::parse::<usize>) {
            Some(Ok(s)) if s >= 1 => standard::relay(s),
            _ => bail!("no network file or built-in network named `{spec}`"),
        },
    })
}

/// An algebra spec such as `field:4`, `zmod:4` or `product:zmod:2,zmod:2`; a
/// bare integer `q` means `field:q`.
pub fn alphabet(spec: &str) -> Result<Algebra> {
    let spec = if spec.parse::<u32>().is_ok() { format!("field:{spec}") } else { spec.to_string() };
    Algebra::parse(&spec).with_context(|| format!("alphabet `{spec}`"))
}

/// A built-in function spec or `table:<path>`. Table arity must match
/// `sources` when that is given; built-ins need it.
pub fn function(spec: &str, alg: &Algebra, sources: Option<usize>) -> Result<TargetFunction> {
    if let Some(path) = spec.strip_prefix("table:") {
        let f = TargetFunction::read_table(Path::new(path), alg)?;
        if let Some(s) = sources.filter(|&s| s != f.arity()) {
            bail!("table {path} has arity {}, expected {s}", f.arity());
        }
        return Ok(f);
    }
    let Some(s) = sources else { bail!("function `{spec}` needs an arity (--sources)") };
    Ok(TargetFunction::builtin(spec, alg, s)?)
}
