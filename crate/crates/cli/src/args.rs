use std::collections::BTreeMap;

use anyhow::{anyhow, bail, Context, Result};
use cdu_core::{parse_element_list, CRange, FamilyParams, Field};
use clap::Args;

/// Family selection, given either as `key=value` tokens or as flags.
/// Flags win over tokens.
#[derive(Debug, Args, Clone, Default)]
pub struct FamilyArgs {
    /// `key=value` tokens, e.g. `family=f t=2 n=1 i=1 gamma=g^3 c=all`
    #[arg(value_name = "KEY=VALUE")]
    pub tokens: Vec<String>,

    #[arg(long)]
    pub family: Option<String>,
    #[arg(long)]
    pub t: Option<u32>,
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long)]
    pub i: Option<u32>,
    #[arg(long)]
    pub gamma: Option<String>,
    #[arg(long)]
    pub k: Option<u64>,

    /// element, comma list, `all` or `subfield:<s>`
    #[arg(long)]
    pub c: Option<String>,

    /// comma list of multipliers to skip (default `0,1` for `all`/`subfield:`)
    #[arg(long)]
    pub exclude: Option<String>,

    /// build h even when its permutation condition fails
    #[arg(long)]
    pub override_h_precondition: bool,
}

impl FamilyArgs {
    fn merged(&self) -> Result<BTreeMap<String, String>> {
        let mut map = BTreeMap::new();
        for token in &self.tokens {
            let (k, v) = token
                .split_once('=')
                .ok_or_else(|| anyhow!("expected key=value, got {token:?}"))?;
            map.insert(k.to_string(), v.to_string());
        }
        let flags = [
            ("family", self.family.clone()),
            ("t", self.t.map(|v| v.to_string())),
            ("n", self.n.map(|v| v.to_string())),
            ("i", self.i.map(|v| v.to_string())),
            ("gamma", self.gamma.clone()),
            ("k", self.k.map(|v| v.to_string())),
            ("c", self.c.clone()),
            ("exclude", self.exclude.clone()),
        ];
        for (key, value) in flags {
            if let Some(v) = value {
                map.insert(key.to_string(), v);
            }
        }
        Ok(map)
    }

    /// Family parameters; `gamma_default` fills in a missing gamma.
    pub fn params(&self, gamma_default: Option<&str>) -> Result<FamilyParams> {
        let mut map = self.merged()?;
        if let Some(g) = gamma_default {
            map.entry("gamma".into()).or_insert_with(|| g.to_string());
        }
        let text = map
            .iter()
            .filter(|(k, _)| !matches!(k.as_str(), "c" | "exclude"))
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(" ");
        text.parse::<FamilyParams>()
            .with_context(|| format!("invalid family parameters {text:?}"))
    }

    pub fn c_spec(&self) -> Result<Option<String>> {
        Ok(self.merged()?.get("c").cloned())
    }

    /// The c range and exclusion list.
    pub fn c_range(&self, field: &Field, default: &str) -> Result<(CRange, Vec<u32>)> {
        let map = self.merged()?;
        let spec = map.get("c").map(String::as_str).unwrap_or(default);
        let range = parse_c_range(field, spec)?;
        let exclusions = match map.get("exclude") {
            Some(list) => parse_element_list(field, list)?,
            None => match range {
                CRange::Set(_) => Vec::new(),
                _ => vec![0, 1],
            },
        };
        Ok((range, exclusions))
    }
}

pub fn parse_c_range(field: &Field, spec: &str) -> Result<CRange> {
    let spec = spec.trim();
    if spec.eq_ignore_ascii_case("all") {
        return Ok(CRange::All);
    }
    if let Some(s) = spec.strip_prefix("subfield:") {
        let s: u32 = s
            .parse()
            .with_context(|| format!("bad subfield degree {s:?}"))?;
        field.check_subfield(s)?;
        return Ok(CRange::Subfield(s));
    }
    let list = parse_element_list(field, spec)?;
    if list.is_empty() {
        bail!("empty c list");
    }
    Ok(CRange::Set(list))
}
