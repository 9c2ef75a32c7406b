//! Named coin families with typed parameter lists, used by the command
//! line front end.
//!
//! Parameters arrive as `key=value` strings. Values understood here:
//!
//! * reals: `0.3`, `-1e-2`, `pi`, `pi/3`, `2pi/5`, `-pi/4`
//! * complex: `0.5`, `-i`, `0.5+0.5i`, `1e-3-2i`
//! * unitaries: `identity`, `hadamard`, `dft`, `grover`, `x`, `y`, `z`, `random`
//! * frames: `canonical`, `random`
//! * signs: `+`, `-`
//!
//! Anything drawn at random uses the caller's generator.

use std::collections::BTreeMap;

use rand::Rng;
use serde::Serialize;

use crate::coins::{self, CoinSet, ProjectorPartition, ScalarSign, StandardCoin};
use crate::error::{Error, Result};
use crate::group::GroupPresentation;
use crate::linalg::{self, c, ComplexMatrix, C64};

pub type Params = BTreeMap<String, String>;

#[derive(Clone, Debug, Serialize)]
pub struct ParamSpec {
    pub name: &'static str,
    #[serde(rename = "type")]
    pub kind: &'static str,
    pub required: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub default: Option<&'static str>,
    pub description: &'static str,
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilyInfo {
    pub name: &'static str,
    /// Library function that builds the coins.
    pub constructor: &'static str,
    /// Presentation the family targets; `any` means the caller supplies one.
    pub presentation: &'static str,
    pub params: Vec<ParamSpec>,
    pub description: &'static str,
}

const fn req(name: &'static str, kind: &'static str, description: &'static str) -> ParamSpec {
    ParamSpec {
        name,
        kind,
        required: true,
        default: None,
        description,
    }
}

const fn opt(name: &'static str, kind: &'static str, default: &'static str, description: &'static str) -> ParamSpec {
    ParamSpec {
        name,
        kind,
        required: false,
        default: Some(default),
        description,
    }
}

pub fn catalog() -> Vec<FamilyInfo> {
    vec![
        FamilyInfo {
            name: "free_projector_coin",
            constructor: "free_projector_coin",
            presentation: "any",
            params: vec![
                opt("u", "unitary", "random", "internal unitary U"),
                opt("dim", "integer", "|Δ|", "internal dimension"),
                opt(
                    "blocks",
                    "partition",
                    "contiguous",
                    "projector blocks as `gen:i+j;gen:k`, 0-based indices",
                ),
            ],
            description: "M_δ = U P_δ for a complete family of coordinate projectors; unitary on every Cayley graph",
        },
        FamilyInfo {
            name: "lazy_1d_dim3",
            constructor: "lazy_1d_dim3",
            presentation: "abelian:n=1,lazy",
            params: vec![opt("u", "unitary", "random", "3×3 unitary U")],
            description: "line walk with a rest state: M_δ = U P₁, M_δ⁻¹ = U P₂, M_e = U P₃",
        },
        FamilyInfo {
            name: "lazy_1d_dim2",
            constructor: "lazy_1d_dim2",
            presentation: "abelian:n=1,lazy",
            params: vec![
                opt("u", "unitary", "random", "2×2 unitary U"),
                req("theta", "real", "mixing angle between moving and resting"),
            ],
            description: "line walk with a rest move on a two-dimensional internal space",
        },
        FamilyInfo {
            name: "symmetric_1d",
            constructor: "symmetric_1d",
            presentation: "abelian:n=1",
            params: vec![
                req("theta", "real", "rotation angle"),
                opt("alpha", "real", "0", "relative phase"),
                opt("phase", "real", "0", "global phase"),
            ],
            description: "left-right symmetric line walk, three real parameters",
        },
        FamilyInfo {
            name: "abelian2d_dim2",
            constructor: "abelian2d_dim2",
            presentation: "abelian:n=2",
            params: vec![
                opt("u", "unitary", "random", "2×2 unitary U"),
                opt("v", "unitary", "random", "2×2 unitary V"),
            ],
            description:
                "square lattice walk with a two-dimensional internal space; factorizes into two diagonal line walks",
        },
        FamilyInfo {
            name: "abelian_paired",
            constructor: "abelian_paired",
            presentation: "abelian:n=<n>",
            params: vec![
                req("n", "integer", "lattice rank"),
                opt(
                    "u",
                    "unitary",
                    "random",
                    "U for every pair block (random draws independently per block)",
                ),
                opt("v", "unitary", "random", "V for every pair block"),
                opt(
                    "tail",
                    "unitary",
                    "random",
                    "2×2 coin of the last generator when n is odd",
                ),
            ],
            description: "rank-n lattice walk from two-dimensional blocks; internal dimension n or n+1",
        },
        FamilyInfo {
            name: "abelian2d_dim4_rank2",
            constructor: "abelian2d_dim4_rank2",
            presentation: "abelian:n=2",
            params: vec![
                opt("u_basis", "frame", "canonical", "orthonormal frame u₁…u₄"),
                opt("v_basis", "frame", "canonical", "orthonormal frame v₁…v₄"),
            ],
            description: "square lattice walk with four rank-two coins",
        },
        FamilyInfo {
            name: "abelian2d_dim4_symmetric",
            constructor: "abelian2d_dim4_symmetric",
            presentation: "abelian:n=2",
            params: vec![
                req("a", "complex", "diagonal entry of U₀"),
                req("b", "complex", "partner entry of U₀"),
                req("c", "complex", "cross-block entry of U₀"),
                opt(
                    "d",
                    "diagonal",
                    "identity",
                    "diagonal unitary D (`identity` or `random`)",
                ),
            ],
            description: "square-symmetric lattice walk, M_δ = P_δ D⁻¹ U₀ D",
        },
        FamilyInfo {
            name: "abelian3d_dim4",
            constructor: "abelian3d_dim4",
            presentation: "abelian:n=3",
            params: vec![
                req("lambda", "complex", "λ"),
                req("mu", "complex", "μ"),
                opt("nu", "complex", "1", "unimodular ν"),
                opt(
                    "phases",
                    "phases",
                    "unit",
                    "phases of α₁, β₁, γ₁, δ₁ (`unit` or `random`)",
                ),
                opt("u_basis", "frame", "canonical", "orthonormal frame u₁…u₄"),
                opt("v_basis", "frame", "canonical", "orthonormal frame v₁…v₄"),
            ],
            description: "cubic lattice walk with six rank-two coins",
        },
        FamilyInfo {
            name: "scalar_1d",
            constructor: "scalar_1d",
            presentation: "abelianrel:sq",
            params: vec![
                req("theta", "real", "phase of the forward moves"),
                req("phi", "real", "phase of the backward moves"),
                opt("sign", "sign", "+", "relative sign of the d2 moves"),
            ],
            description: "walk with a one-dimensional internal space on Z² modulo d1² = d2²",
        },
        FamilyInfo {
            name: "hypercube_clifford",
            constructor: "hypercube_clifford",
            presentation: "hypercube:n=<n>",
            params: vec![
                req("n", "integer", "hypercube dimension"),
                opt("u", "unitary", "identity", "unitary of size 2^⌊n/2⌋"),
            ],
            description: "M_δᵢ = σᵢ U / √n with anticommuting Hermitian σᵢ",
        },
    ]
}

pub fn catalog_json() -> String {
    serde_json::to_string_pretty(&catalog()).expect("catalog serializes")
}

pub fn family_names() -> Vec<&'static str> {
    catalog().iter().map(|f| f.name).collect()
}

pub fn family(name: &str) -> Result<FamilyInfo> {
    catalog()
        .into_iter()
        .find(|f| f.name == name)
        .ok_or_else(|| Error::UnknownFamily {
            name: name.to_string(),
            valid: family_names().join(", "),
        })
}

/// Splits `k=v,k=v` on commas outside brackets.
pub fn parse_params(text: &str) -> Result<Params> {
    let mut out = Params::new();
    let mut depth = 0i32;
    let mut start = 0;
    let mut pieces = Vec::new();
    for (i, ch) in text.char_indices() {
        match ch {
            '[' | '(' => depth += 1,
            ']' | ')' => depth -= 1,
            ',' if depth == 0 => {
                pieces.push(&text[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    pieces.push(&text[start..]);
    for piece in pieces.into_iter().map(str::trim).filter(|p| !p.is_empty()) {
        let (k, v) = piece
            .split_once('=')
            .ok_or_else(|| Error::InvalidParameter(format!("expected key=value, got `{piece}`")))?;
        let k = k.trim();
        if out.insert(k.to_string(), v.trim().to_string()).is_some() {
            return Err(Error::InvalidParameter(format!("parameter `{k}` given twice")));
        }
    }
    Ok(out)
}

pub fn parse_real(text: &str) -> Result<f64> {
    let t = text.trim();
    let bad = || Error::InvalidParameter(format!("cannot read `{text}` as a real number"));
    if let Ok(x) = t.parse::<f64>() {
        return if x.is_finite() { Ok(x) } else { Err(bad()) };
    }
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t),
    };
    let (num, den) = match body.split_once('/') {
        Some((n, d)) => (n, d.parse::<f64>().map_err(|_| bad())?),
        None => (body, 1.0),
    };
    let coeff = match num.strip_suffix("pi") {
        Some("") => 1.0,
        Some(k) => k.trim_end_matches('*').parse::<f64>().map_err(|_| bad())?,
        None => return Err(bad()),
    };
    let x = coeff * std::f64::consts::PI / den;
    if !x.is_finite() {
        return Err(bad());
    }
    Ok(if neg { -x } else { x })
}

/// `a`, `bi`, `a+bi`, `a-bi`, `i`, `-i`.
pub fn parse_complex(text: &str) -> Result<C64> {
    let t: String = text.chars().filter(|ch| !ch.is_whitespace()).collect();
    let bad = || Error::InvalidParameter(format!("cannot read `{text}` as a complex number"));
    if t.is_empty() {
        return Err(bad());
    }
    let Some(body) = t.strip_suffix('i') else {
        return parse_real(&t).map(|x| c(x, 0.0));
    };
    // find the sign that separates real and imaginary parts, skipping exponents
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("", body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        s => s.parse::<f64>().map_err(|_| bad())?,
    };
    let re = if re.is_empty() {
        0.0
    } else {
        re.parse::<f64>().map_err(|_| bad())?
    };
    if !re.is_finite() || !im.is_finite() {
        return Err(bad());
    }
    Ok(c(re, im))
}

pub fn parse_unitary<R: Rng + ?Sized>(text: &str, dim: usize, rng: &mut R) -> Result<ComplexMatrix> {
    let need_two = |m: ComplexMatrix| {
        if dim == 2 {
            Ok(m)
        } else {
            Err(Error::InvalidParameter(format!(
                "`{text}` is 2×2 but dimension {dim} is required"
            )))
        }
    };
    match text {
        "identity" => Ok(linalg::identity(dim)),
        "random" => Ok(linalg::random_unitary(dim, rng)),
        "hadamard" => coins::standard_coin(StandardCoin::Hadamard, dim),
        "dft" => coins::standard_coin(StandardCoin::Dft, dim),
        "grover" => coins::standard_coin(StandardCoin::Grover, dim),
        "x" => need_two(linalg::pauli_x()),
        "y" => need_two(linalg::pauli_y()),
        "z" => need_two(linalg::pauli_z()),
        _ => Err(Error::InvalidParameter(format!(
            "unknown unitary `{text}` (expected identity, random, hadamard, dft, grover, x, y or z)"
        ))),
    }
}

fn parse_frame<R: Rng + ?Sized>(text: &str, rng: &mut R) -> Result<ComplexMatrix> {
    match text {
        "canonical" => Ok(linalg::identity(4)),
        "random" => Ok(linalg::random_unitary(4, rng)),
        _ => Err(Error::InvalidParameter(format!(
            "unknown frame `{text}` (expected canonical or random)"
        ))),
    }
}

fn parse_blocks(text: &str, dim: usize) -> Result<ProjectorPartition> {
    let blocks = text
        .split(';')
        .map(|b| {
            let (name, idx) = b
                .split_once(':')
                .ok_or_else(|| Error::InvalidPartition(format!("expected gen:i+j, got `{b}`")))?;
            let idx = idx
                .split('+')
                .map(|k| {
                    k.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::InvalidPartition(format!("bad index `{k}`")))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok((name.trim().to_string(), idx))
        })
        .collect::<Result<Vec<_>>>()?;
    ProjectorPartition::new(dim, blocks)
}

struct Args<'a> {
    family: &'a FamilyInfo,
    params: &'a Params,
}

impl Args<'_> {
    fn raw(&self, key: &str) -> Option<&str> {
        self.params.get(key).map(String::as_str).or_else(|| {
            self.family
                .params
                .iter()
                .find(|p| p.name == key)
                .and_then(|p| p.default)
        })
    }

    fn required(&self, key: &str) -> Result<&str> {
        self.raw(key)
            .ok_or_else(|| Error::InvalidParameter(format!("missing parameter `{key}` for {}", self.family.name)))
    }

    fn real(&self, key: &str) -> Result<f64> {
        parse_real(self.required(key)?)
    }

    fn complex(&self, key: &str) -> Result<C64> {
        parse_complex(self.required(key)?)
    }

    fn integer(&self, key: &str) -> Result<usize> {
        let v = self.required(key)?;
        v.parse()
            .map_err(|_| Error::InvalidParameter(format!("`{key}` must be a non-negative integer, got `{v}`")))
    }
}

fn expect_presentation(given: Option<&GroupPresentation>, wanted: GroupPresentation) -> Result<GroupPresentation> {
    match given {
        Some(p) if *p != wanted => Err(Error::IncompatiblePresentation(format!(
            "family needs {}, got {}",
            wanted.spec(),
            p.spec()
        ))),
        _ => Ok(wanted),
    }
}

/// Builds a named family. `presentation` overrides the family default where
/// the family allows a choice, and must match it otherwise.
pub fn build<R: Rng + ?Sized>(
    name: &str,
    params: &Params,
    presentation: Option<&GroupPresentation>,
    rng: &mut R,
) -> Result<CoinSet> {
    let info = family(name)?;
    if let Some(key) = params
        .keys()
        .find(|k| !info.params.iter().any(|p| p.name == k.as_str()))
    {
        let valid: Vec<&str> = info.params.iter().map(|p| p.name).collect();
        return Err(Error::InvalidParameter(format!(
            "unknown parameter `{key}` for {name} (valid: {})",
            valid.join(", ")
        )));
    }
    let a = Args { family: &info, params };
    match name {
        "free_projector_coin" => {
            let p = presentation.ok_or_else(|| {
                Error::IncompatiblePresentation("free_projector_coin needs an explicit presentation".into())
            })?;
            let dim = match params.get("dim") {
                Some(_) => a.integer("dim")?,
                None => p.delta().len(),
            };
            let partition = match params.get("blocks") {
                Some(text) => parse_blocks(text, dim)?,
                None => ProjectorPartition::contiguous(p, dim)?,
            };
            let u = parse_unitary(a.required("u")?, dim, rng)?;
            coins::free_projector_coin(p, &u, &partition)
        }
        "lazy_1d_dim3" => {
            let p = presentation
                .cloned()
                .unwrap_or(GroupPresentation::free_abelian(1, true)?);
            let u = parse_unitary(a.required("u")?, 3, rng)?;
            coins::lazy_1d_dim3(&p, &u)
        }
        "lazy_1d_dim2" => {
            let p = presentation
                .cloned()
                .unwrap_or(GroupPresentation::free_abelian(1, true)?);
            let u = parse_unitary(a.required("u")?, 2, rng)?;
            coins::lazy_1d_dim2(&p, &u, a.real("theta")?)
        }
        "symmetric_1d" => {
            let p = presentation
                .cloned()
                .unwrap_or(GroupPresentation::free_abelian(1, false)?);
            coins::symmetric_1d(&p, a.real("theta")?, a.real("alpha")?, a.real("phase")?)
        }
        "abelian2d_dim2" => {
            expect_presentation(presentation, GroupPresentation::free_abelian(2, false)?)?;
            let u = parse_unitary(a.required("u")?, 2, rng)?;
            let v = parse_unitary(a.required("v")?, 2, rng)?;
            coins::abelian2d_dim2(&u, &v)
        }
        "abelian_paired" => {
            let n = a.integer("n")?;
            expect_presentation(presentation, GroupPresentation::free_abelian(n.max(1), false)?)?;
            let pairs = (0..n / 2)
                .map(|_| {
                    Ok((
                        parse_unitary(a.required("u")?, 2, rng)?,
                        parse_unitary(a.required("v")?, 2, rng)?,
                    ))
                })
                .collect::<Result<Vec<_>>>()?;
            let tail = if n % 2 == 1 {
                Some(parse_unitary(a.required("tail")?, 2, rng)?)
            } else {
                None
            };
            coins::abelian_paired(n, &pairs, tail.as_ref())
        }
        "abelian2d_dim4_rank2" => {
            expect_presentation(presentation, GroupPresentation::free_abelian(2, false)?)?;
            let u = parse_frame(a.required("u_basis")?, rng)?;
            let v = parse_frame(a.required("v_basis")?, rng)?;
            coins::abelian2d_dim4_rank2(&u, &v)
        }
        "abelian2d_dim4_symmetric" => {
            expect_presentation(presentation, GroupPresentation::free_abelian(2, false)?)?;
            let d = match a.required("d")? {
                "identity" => linalg::identity(4),
                "random" => linalg::random_diagonal_unitary(4, rng),
                other => {
                    return Err(Error::InvalidParameter(format!(
                        "unknown diagonal `{other}` (expected identity or random)"
                    )))
                }
            };
            coins::abelian2d_dim4_symmetric(a.complex("a")?, a.complex("b")?, a.complex("c")?, &d)
        }
        "abelian3d_dim4" => {
            expect_presentation(presentation, GroupPresentation::free_abelian(3, false)?)?;
            let phases = match a.required("phases")? {
                "unit" => [c(1.0, 0.0); 4],
                "random" => std::array::from_fn(|_| linalg::random_phase(rng)),
                other => {
                    return Err(Error::InvalidParameter(format!(
                        "unknown phases `{other}` (expected unit or random)"
                    )))
                }
            };
            let params = coins::Abelian3dParams {
                lambda: a.complex("lambda")?,
                mu: a.complex("mu")?,
                nu: a.complex("nu")?,
                phases,
                u_basis: parse_frame(a.required("u_basis")?, rng)?,
                v_basis: parse_frame(a.required("v_basis")?, rng)?,
            };
            coins::abelian3d_dim4(&params)
        }
        "scalar_1d" => {
            expect_presentation(presentation, GroupPresentation::abelian_with_relation())?;
            let sign = match a.required("sign")? {
                "+" | "plus" | "1" | "+1" => ScalarSign::Plus,
                "-" | "minus" | "-1" => ScalarSign::Minus,
                other => return Err(Error::InvalidParameter(format!("sign must be + or -, got `{other}`"))),
            };
            coins::scalar_1d(a.real("theta")?, a.real("phi")?, sign)
        }
        "hypercube_clifford" => {
            let n = a.integer("n")?;
            let gens = coins::clifford_generators(n)?;
            expect_presentation(presentation, GroupPresentation::hypercube(n)?)?;
            let u = parse_unitary(a.required("u")?, gens[0].nrows(), rng)?;
            coins::hypercube_clifford(n, &u)
        }
        _ => unreachable!("catalog and dispatch list the same families"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn params(text: &str) -> Params {
        parse_params(text).unwrap()
    }

    #[test]
    fn reals_and_complexes() {
        assert_eq!(parse_real("0.25").unwrap(), 0.25);
        assert!((parse_real("pi/3").unwrap() - std::f64::consts::PI / 3.0).abs() < 1e-16);
        assert!((parse_real("-2pi/5").unwrap() + 2.0 * std::f64::consts::PI / 5.0).abs() < 1e-15);
        assert!(parse_real("nan").is_err());
        assert_eq!(parse_complex("0.5+0.5i").unwrap(), c(0.5, 0.5));
        assert_eq!(parse_complex("-i").unwrap(), c(0.0, -1.0));
        assert_eq!(parse_complex("1e-3-2i").unwrap(), c(1e-3, -2.0));
        assert_eq!(parse_complex("2e-1i").unwrap(), c(0.0, 0.2));
        assert_eq!(parse_complex("-0.5").unwrap(), c(-0.5, 0.0));
        assert!(parse_complex("1+").is_err());
    }

    #[test]
    fn params_split_outside_brackets() {
        let p = params("theta=pi/3, phi=0,sign=-");
        assert_eq!(p["theta"], "pi/3");
        assert_eq!(p["sign"], "-");
        assert!(parse_params("a=1,a=2").is_err());
        assert!(parse_params("novalue").is_err());
    }

    #[test]
    fn every_entry_dispatches() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let samples = [
            ("free_projector_coin", "u=hadamard", Some("abelian:n=1")),
            ("lazy_1d_dim3", "u=dft", None),
            ("lazy_1d_dim2", "theta=pi/4,u=hadamard", None),
            ("symmetric_1d", "theta=pi/2", None),
            ("abelian2d_dim2", "", None),
            ("abelian_paired", "n=3", None),
            ("abelian2d_dim4_rank2", "", None),
            ("abelian2d_dim4_symmetric", "a=-0.5,b=0.5,c=0.5", None),
            ("abelian3d_dim4", "lambda=1,mu=1", None),
            ("scalar_1d", "theta=0,phi=0", None),
            ("hypercube_clifford", "n=3", None),
        ];
        assert_eq!(samples.len(), catalog().len());
        for (name, text, pres) in samples {
            let p = pres.map(|s| GroupPresentation::parse(s).unwrap());
            let set = build(name, &params(text), p.as_ref(), &mut rng);
            assert!(set.is_ok(), "{name}: {:?}", set.err());
        }
    }

    #[test]
    fn unknown_names_and_keys() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        match build("nope", &Params::new(), None, &mut rng) {
            Err(Error::UnknownFamily { valid, .. }) => assert!(valid.contains("hypercube_clifford")),
            other => panic!("{other:?}"),
        }
        let err = build("scalar_1d", &params("theta=0,phi=0,bogus=1"), None, &mut rng);
        assert!(matches!(err, Err(Error::InvalidParameter(_))));
        let err = build("scalar_1d", &params("phi=0"), None, &mut rng);
        assert!(matches!(err, Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn fixed_presentations_are_enforced() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let p = GroupPresentation::free_abelian(3, false).unwrap();
        let err = build("abelian2d_dim2", &Params::new(), Some(&p), &mut rng);
        assert!(matches!(err, Err(Error::IncompatiblePresentation(_))));
    }

    #[test]
    fn explicit_blocks() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let p = GroupPresentation::free(&["a", "b"]).unwrap();
        let set = build(
            "free_projector_coin",
            &params("dim=4,blocks=a:0+3;b:1+2,u=identity"),
            Some(&p),
            &mut rng,
        )
        .unwrap();
        assert_eq!(set.coin("a").unwrap()[(3, 3)], c(1.0, 0.0));
    }

    #[test]
    fn catalog_json_lists_required_params() {
        let v: serde_json::Value = serde_json::from_str(&catalog_json()).unwrap();
        let hyper = v
            .as_array()
            .unwrap()
            .iter()
            .find(|f| f["name"] == "hypercube_clifford")
            .unwrap();
        let n = hyper["params"]
            .as_array()
            .unwrap()
            .iter()
            .find(|p| p["name"] == "n")
            .unwrap();
        assert_eq!(n["required"], true);
    }
}
