//! Reading JSON inputs and parameter files.

use std::collections::BTreeMap;
use std::path::Path;

use padwave::json::{check_schema, parse_cyc, parse_index_pair, parse_mask, parse_matrix, parse_rat, parse_stepfn};
use padwave::{CycMatrix, CycNumber, FilterSeq, Prime, Rat, StepFunction};
use serde_json::Value;

use crate::report::Failure;

pub fn read_json(path: &Path) -> Result<Value, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {}", path.display(), e)))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {}", path.display(), e)))?;
    check_schema(&v).map_err(|e| Failure::Input(format!("{}: {}", path.display(), e)))?;
    Ok(v)
}

fn located(path: &Path) -> impl Fn(padwave::Error) -> Failure + '_ {
    move |e| match Failure::from(e) {
        Failure::Input(m) => Failure::Input(format!("{}: {}", path.display(), m)),
        other => other,
    }
}

pub fn read_function(path: &Path) -> Result<StepFunction, Failure> {
    parse_stepfn(&read_json(path)?).map_err(located(path))
}

pub fn read_mask(path: &Path) -> Result<FilterSeq, Failure> {
    parse_mask(&read_json(path)?).map_err(located(path))
}

pub fn prime(p: u64) -> Result<Prime, Failure> {
    Prime::new(p).map_err(|e| Failure::Usage(e.to_string()))
}

pub fn rational(s: &str) -> Result<Rat, Failure> {
    parse_rat(s.trim()).map_err(|e| Failure::Usage(format!("{:?}: {}", s, e)))
}

/// σ and Z for the Haar-type family; either may be absent.
pub struct HaarTypeFile {
    pub sigma: Option<BTreeMap<(u64, u64), CycNumber>>,
    pub z: Option<CycMatrix>,
}

pub fn read_haar_type_params(path: &Path) -> Result<HaarTypeFile, Failure> {
    let v = read_json(path)?;
    let at = located(path);
    let sigma = match v.get("sigma") {
        None => None,
        Some(Value::Object(m)) => {
            let mut out = BTreeMap::new();
            for (k, c) in m {
                out.insert(parse_index_pair(k).map_err(&at)?, parse_cyc(c).map_err(&at)?);
            }
            Some(out)
        }
        Some(_) => {
            return Err(Failure::Input(format!(
                "{}: \"sigma\" must be an object",
                path.display()
            )))
        }
    };
    let z = v.get("Z").map(parse_matrix).transpose().map_err(&at)?;
    Ok(HaarTypeFile { sigma, z })
}

/// γ as {"s,r": cyc} with s a rational in J(p, m); returns per-s rows indexed by r.
pub fn read_gamma(path: &Path, len: usize) -> Result<BTreeMap<Rat, Vec<CycNumber>>, Failure> {
    let v = read_json(path)?;
    let at = located(path);
    let bad = |m: String| Failure::Input(format!("{}: {}", path.display(), m));
    let entries = match v.get("gamma") {
        None => return Ok(BTreeMap::new()),
        Some(Value::Object(m)) => m,
        Some(_) => return Err(bad("\"gamma\" must be an object".into())),
    };
    let mut rows: BTreeMap<Rat, Vec<Option<CycNumber>>> = BTreeMap::new();
    for (key, c) in entries {
        let (s, r) = key
            .rsplit_once(',')
            .ok_or_else(|| bad(format!("γ key {:?} is not \"s,r\"", key)))?;
        let s = parse_rat(s.trim()).map_err(&at)?;
        let r: usize = r
            .trim()
            .parse()
            .map_err(|_| bad(format!("γ key {:?} has a bad index", key)))?;
        if r >= len {
            return Err(bad(format!("γ index {} out of range 0..{}", r, len)));
        }
        rows.entry(s).or_insert_with(|| vec![None; len])[r] = Some(parse_cyc(c).map_err(&at)?);
    }
    rows.into_iter()
        .map(|(s, row)| {
            let row = row
                .into_iter()
                .enumerate()
                .map(|(r, c)| c.ok_or_else(|| bad(format!("γ_{{{},{}}} missing", s, r))))
                .collect::<Result<Vec<_>, _>>()?;
            Ok((s, row))
        })
        .collect()
}
