//! Selector strings for maps, rings, Φ functions and conditions.

use anyhow::{anyhow, bail, Context};
use qclab_core::mappings::{self, MappingModel};
use qclab_core::phi::{Condition, PhiFunction};
use qclab_core::Ring;

use crate::config::ProfileSpec;

pub const MAP_SELECTORS: &str =
    "identity, radial_stretch:A, power_stretch:A, shrinking:M, log_type, log_squared, or a [[profile]] name";

fn parse_num<T: std::str::FromStr>(sel: &str, arg: &str) -> anyhow::Result<T> {
    arg.parse().map_err(|_| anyhow!("selector '{sel}': cannot parse parameter '{arg}'"))
}

pub fn map(sel: &str, profiles: &[ProfileSpec]) -> anyhow::Result<MappingModel> {
    let (head, arg) = match sel.split_once(':') {
        Some((h, a)) => (h, Some(a)),
        None => (sel, None),
    };
    let need = || arg.ok_or_else(|| anyhow!("selector '{sel}' needs a parameter, e.g. '{head}:2'"));
    let model = match head {
        "identity" => mappings::identity(),
        "radial_stretch" => mappings::radial_stretch(parse_num(sel, need()?)?)?,
        "power_stretch" => mappings::power_stretch(parse_num(sel, need()?)?)?,
        "shrinking" => mappings::shrinking_stretch_family(&[parse_num(sel, need()?)?])?.remove(0),
        "log_type" => mappings::log_type_map(),
        "log_squared" => mappings::log_squared_map(),
        _ => match profiles.iter().find(|p| p.name == sel) {
            Some(p) => profile_map(p)?,
            None => bail!("unknown map selector '{sel}'; expected one of: {MAP_SELECTORS}"),
        },
    };
    Ok(model)
}

fn profile_map(p: &ProfileSpec) -> anyhow::Result<MappingModel> {
    let logs: Vec<f64> = p.radii.iter().map(|r| r.ln()).collect();
    let ks = p.distortion.clone();
    let k = move |r: f64| {
        let l = r.ln();
        let i = logs.partition_point(|&x| x <= l);
        if i == 0 {
            ks[0]
        } else if i == logs.len() {
            ks[ks.len() - 1]
        } else {
            let w = (l - logs[i - 1]) / (logs[i] - logs[i - 1]);
            ks[i - 1] * (1.0 - w) + ks[i] * w
        }
    };
    Ok(mappings::radial_from_distortion(p.name.clone(), k, p.core)?)
}

/// `"r1:r2"`, a ring about the origin.
pub fn ring(sel: &str) -> anyhow::Result<Ring> {
    let (a, b) = sel
        .split_once(':')
        .ok_or_else(|| anyhow!("ring selector '{sel}' must look like 'r1:r2'"))?;
    Ring::centered(parse_num(sel, a)?, parse_num(sel, b)?).with_context(|| format!("ring selector '{sel}'"))
}

pub fn phi(sel: &str) -> anyhow::Result<PhiFunction> {
    PhiFunction::from_selector(sel).with_context(|| format!("phi selector '{sel}'"))
}

/// Accepts `all` or condition names.
pub fn conditions(sels: &[String]) -> anyhow::Result<Vec<Condition>> {
    if sels.is_empty() || sels.iter().any(|s| s == "all") {
        return Ok(Condition::ALL.to_vec());
    }
    sels.iter()
        .map(|s| s.parse::<Condition>().with_context(|| format!("condition selector '{s}'")))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_resolve() {
        for s in ["identity", "radial_stretch:3", "power_stretch:0.5", "shrinking:10", "log_type", "log_squared"] {
            map(s, &[]).unwrap();
        }
        assert!(map("radial_stretch", &[]).is_err());
        assert!(map("nope", &[]).unwrap_err().to_string().contains("unknown map selector"));
    }

    #[test]
    fn tabulated_profile_interpolates() {
        let p = ProfileSpec {
            name: "tab".into(),
            radii: vec![0.01, 1.0],
            distortion: vec![3.0, 1.0],
            core: 1e-3,
        };
        let f = map("tab", &[p]).unwrap();
        let k = f.distortion_at(num_complex::Complex64::new(0.1, 0.0));
        assert!((k - 2.0).abs() < 1e-9, "{k}");
    }

    #[test]
    fn rings_and_conditions() {
        let r = ring("0.1:0.5").unwrap();
        assert_eq!((r.inner(), r.outer()), (0.1, 0.5));
        assert!(ring("0.5").is_err() && ring("0.5:0.1").is_err());
        assert_eq!(conditions(&["all".into()]).unwrap().len(), 6);
        assert_eq!(conditions(&["phi-inverse".into()]).unwrap(), vec![Condition::PhiInverse]);
    }
}
