//! Run reports: a machine-readable `key = value` section that depends only on
//! the inputs and seed, followed by free-form human notes.

use std::fmt::{self, Display};

use netcomp::network::{BoundValue, LogQuotient};
use num_rational::Ratio;

/// Float values are printed with this many decimals.
const FLOAT_DECIMALS: usize = 12;

pub struct Report {
    machine: Vec<(String, String)>,
    human: Vec<String>,
}

impl Report {
    pub fn new(command: &str, seed: u64) -> Report {
        let mut r = Report { machine: Vec::new(), human: Vec::new() };
        r.put("command", command);
        r.put("seed", seed);
        r
    }

    pub fn put(&mut self, key: &str, value: impl Display) {
        self.machine.push((key.to_string(), value.to_string()));
    }

    /// Exact rational, tagged as such.
    pub fn rational(&mut self, key: &str, r: Ratio<u64>) {
        self.put(key, format!("{r} [exact]"));
    }

    /// Exact logarithmic quotient with its `(numerator, base, argument)`
    /// triple, plus a float rendering under `{key}.float`.
    pub fn log(&mut self, key: &str, l: &LogQuotient) {
        self.bound(key, "", &BoundValue::Log(l.clone()));
    }

    /// A bound value after `prefix`, tagged with its exact form.
    pub fn bound(&mut self, key: &str, prefix: &str, v: &BoundValue) {
        match v {
            BoundValue::Log(l) if l.exact().is_none() => {
                self.put(key, format!("{prefix}{l} [log {} {} {}]", l.numerator, l.base, l.argument));
                self.float(&format!("{key}.float"), l.to_f64());
            }
            BoundValue::Log(l) => self.put(key, format!("{prefix}{} [exact]", l.exact().unwrap())),
            BoundValue::Rational(r) => self.put(key, format!("{prefix}{r} [exact]")),
        }
    }

    pub fn float(&mut self, key: &str, x: f64) {
        self.put(key, format!("{x:.FLOAT_DECIMALS$} [float tol=1e-{FLOAT_DECIMALS}]"));
    }

    pub fn note(&mut self, line: impl Into<String>) {
        self.human.push(line.into());
    }
}

impl Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[machine]")?;
        for (k, v) in &self.machine {
            writeln!(f, "{k} = {v}")?;
        }
        if !self.human.is_empty() {
            writeln!(f, "\n[notes]")?;
            for line in &self.human {
                writeln!(f, "{line}")?;
            }
        }
        Ok(())
    }
}
