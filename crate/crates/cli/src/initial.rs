//! Initial state specs: `uniform`, `basis:K` or `vec:Z1,Z2,...`, each
//! optionally followed by `@WORD` naming the starting vertex as a group
//! word (the identity when absent).

use anyhow::{bail, Context};
use qwalk_core::coins::registry;
use qwalk_core::linalg::C64;
use qwalk_core::walk;
use qwalk_core::{CoinSet, GraphRealization};

pub fn parse(spec: &str, coins: &CoinSet, realization: &GraphRealization) -> anyhow::Result<(Vec<C64>, usize)> {
    let (state, at) = match spec.split_once('@') {
        Some((s, w)) => (s.trim(), Some(w.trim())),
        None => (spec.trim(), None),
    };
    let d = coins.dim();
    let internal = if state == "uniform" {
        walk::uniform_internal(d)
    } else if let Some(k) = state.strip_prefix("basis:") {
        let k: usize = k.trim().parse().with_context(|| format!("bad basis index `{k}`"))?;
        walk::basis_internal(d, k)?
    } else if let Some(list) = state.strip_prefix("vec:") {
        let v = list
            .split(',')
            .map(|z| registry::parse_complex(z.trim()))
            .collect::<Result<Vec<_>, _>>()?;
        if v.len() != d {
            bail!("initial vector has {} entries, the coins act on dimension {d}", v.len());
        }
        v
    } else {
        bail!("initial state `{state}` is not `uniform`, `basis:K` or `vec:...`");
    };
    let vertex = match at {
        None | Some("") => realization.origin(),
        Some(word) => {
            let x = coins
                .presentation()
                .canonicalize_str(word)
                .with_context(|| format!("bad starting vertex `{word}`"))?;
            realization.vertex_of(&x)
        }
    };
    Ok((internal, vertex))
}
