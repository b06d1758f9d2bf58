//! JSON instance files: an algebroid, named tensors and raw elements.
//!
//! All entries are polynomial strings (see [`super::poly`]); indices in the
//! file are 1-based. Files written by [`InstanceFile::to_json`] are
//! canonical: parsing one and writing it again reproduces it byte for byte.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::poly::{format_polynomial, parse_polynomial};
use crate::error::{Error, Result};
use crate::graded_algebra::GradedElement;
use crate::random::Instance;
use crate::supergeometry::{AlgebroidSpec, PhaseSpace};
use crate::tensor_calculus::{bivector, bivector_components, form2, form2_components, Matrix};
use crate::{Element, RMatrix};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoefficientMode {
    #[default]
    Rational,
    /// Every coefficient must be an integer.
    Integer,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebroidFile {
    /// `anchor[a][i] = ρ^i_a`.
    #[serde(default)]
    pub anchor: Vec<Vec<String>>,
    /// `structure[c][a][b] = c^c_{ab}`.
    pub structure: Vec<Vec<Vec<String>>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentFile {
    /// Strictly increasing, 1-based.
    pub indices: Vec<usize>,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum TensorFile {
    /// A `(1,1)`-tensor `N` on `A`, `matrix[i][j] = N^i_j`.
    #[serde(rename = "endomorphism")]
    Endomorphism { matrix: Vec<Vec<String>> },
    /// `π = Σ_{a<b} π^{ab} θ_a θ_b`, `matrix[a][b] = π^{ab}` (antisymmetric).
    #[serde(rename = "bivector")]
    Bivector { matrix: Vec<Vec<String>> },
    /// `ω = Σ_{a<b} ω_{ab} ξ^a ξ^b`, `matrix[a][b] = ω_{ab}` (antisymmetric).
    #[serde(rename = "2-form")]
    Form2 { matrix: Vec<Vec<String>> },
    /// `H = Σ_{a<b<c} H_{abc} ξ^a ξ^b ξ^c`, nonzero components only.
    #[serde(rename = "3-form")]
    Form3 { components: Vec<ComponentFile> },
}

/// One term `coefficient · x^x · p^p · ξ^{xi[0]} ⋯ θ_{theta[0]} ⋯`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermFile {
    pub coefficient: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub x: Vec<u32>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub p: Vec<u32>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub xi: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub theta: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub base_dim: usize,
    pub rank: usize,
    #[serde(default)]
    pub coefficients: CoefficientMode,
    pub algebroid: AlgebroidFile,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub tensors: BTreeMap<String, TensorFile>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub elements: BTreeMap<String, Vec<TermFile>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile: Option<String>,
}

// ---------------------------------------------------------------------------
// reading

struct Reader {
    space: PhaseSpace,
    mode: CoefficientMode,
}

impl Reader {
    fn poly(&self, s: &str, field: &str) -> Result<Element> {
        let e = parse_polynomial(self.space, s, field)?;
        if self.mode == CoefficientMode::Integer && e.terms().any(|(_, c)| !c.is_integer()) {
            return Err(Error::parse(field, format!("non-integer coefficient in {s:?} (coefficients: integer)")));
        }
        Ok(e)
    }

    fn matrix(&self, rows: &[Vec<String>], field: &str) -> Result<RMatrix> {
        let d = self.space.rank();
        if rows.len() != d || rows.iter().any(|r| r.len() != d) {
            return Err(Error::parse(field, format!("expected a {d}x{d} matrix")));
        }
        let mut m = Matrix::zero(self.space, d, d);
        for (i, row) in rows.iter().enumerate() {
            for (j, s) in row.iter().enumerate() {
                m.set(i, j, self.poly(s, &format!("{field}[{}][{}]", i + 1, j + 1))?);
            }
        }
        Ok(m)
    }

    fn skew(&self, rows: &[Vec<String>], field: &str) -> Result<RMatrix> {
        let m = self.matrix(rows, field)?;
        let d = self.space.rank();
        for a in 0..d {
            for b in 0..d {
                if m.get(a, b) != &-m.get(b, a) {
                    return Err(Error::parse(
                        format!("{field}[{}][{}]", a + 1, b + 1),
                        format!("antisymmetry violated: {} vs [{}][{}] = {}", m.get(a, b), b + 1, a + 1, m.get(b, a)),
                    ));
                }
            }
        }
        Ok(m)
    }

    fn index(&self, a: usize, field: &str) -> Result<usize> {
        if a == 0 || a > self.space.rank() {
            return Err(Error::parse(field, format!("index {a} out of range 1..={}", self.space.rank())));
        }
        Ok(a - 1)
    }

    fn form3(&self, components: &[ComponentFile], field: &str) -> Result<Element> {
        let mut out = Element::zero(self.space);
        for (n, c) in components.iter().enumerate() {
            let f = format!("{field}.components[{}]", n + 1);
            if c.indices.len() != 3 || c.indices.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::parse(f, "expected three strictly increasing indices"));
            }
            let mut mask = 0u32;
            for &a in &c.indices {
                mask |= 1 << self.index(a, &f)?;
            }
            let v = self.poly(&c.value, &format!("{f}.value"))?;
            out += &(&v * &Element::odd_monomial(self.space, mask));
        }
        Ok(out)
    }

    fn terms(&self, terms: &[TermFile], field: &str) -> Result<Element> {
        let n = self.space.base_dim();
        let mut out = Element::zero(self.space);
        for (k, t) in terms.iter().enumerate() {
            let f = format!("{field}[{}]", k + 1);
            let exps = |v: &[u32], what: &str| -> Result<Vec<u32>> {
                match v.len() {
                    0 => Ok(vec![0; n]),
                    l if l == n => Ok(v.to_vec()),
                    l => Err(Error::parse(format!("{f}.{what}"), format!("expected {n} exponents, found {l}"))),
                }
            };
            let (x, p) = (exps(&t.x, "x")?, exps(&t.p, "p")?);
            let odd = |v: &[usize], what: &str| -> Result<Vec<usize>> {
                let out: Vec<usize> = v.iter().map(|&a| self.index(a, &format!("{f}.{what}"))).collect::<Result<_>>()?;
                let mut sorted = out.clone();
                sorted.sort_unstable();
                sorted.dedup();
                if sorted.len() != out.len() {
                    return Err(Error::parse(format!("{f}.{what}"), "repeated odd generator"));
                }
                Ok(out)
            };
            let (xi, theta) = (odd(&t.xi, "xi")?, odd(&t.theta, "theta")?);
            let c = self.poly(&t.coefficient, &format!("{f}.coefficient"))?;
            let c = c.as_constant().ok_or_else(|| {
                Error::parse(format!("{f}.coefficient"), "term coefficients are numbers; use x exponents for polynomials")
            })?;
            out += &GradedElement::from_factors(self.space, c, &x, &p, &xi, &theta)
                .map_err(|e| Error::parse(f.clone(), e.to_string()))?;
        }
        Ok(out)
    }
}

impl InstanceFile {
    pub fn from_json(text: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(text).map_err(json_error)?;
        Self::from_value(value)
    }

    /// Accepts an instance file, or a report that embeds one.
    pub fn from_value(mut value: serde_json::Value) -> Result<Self> {
        if let Some(inner) = value.get_mut("instance") {
            value = inner.take();
        }
        serde_json::from_value(value).map_err(json_error)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::parse(path.display().to_string(), e.to_string()))?;
        Self::from_json(&text).map_err(|e| match e {
            Error::Parse { context, message } => Error::parse(format!("{}: {context}", path.display()), message),
            other => other,
        })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()).map_err(|e| Error::parse(path.display().to_string(), e.to_string()))
    }

    pub fn space(&self) -> Result<PhaseSpace> {
        PhaseSpace::new(self.base_dim, self.rank)
    }

    /// Validate and convert.
    pub fn to_instance(&self) -> Result<Instance> {
        let space = self.space()?;
        let r = Reader { space, mode: self.coefficients };
        let (n, d) = (self.base_dim, self.rank);
        let anchor = if self.algebroid.anchor.is_empty() && n == 0 {
            vec![Vec::new(); d]
        } else {
            if self.algebroid.anchor.len() != d || self.algebroid.anchor.iter().any(|row| row.len() != n) {
                return Err(Error::parse("algebroid.anchor", format!("expected {d} rows of {n} polynomials")));
            }
            let mut rows = Vec::new();
            for (a, row) in self.algebroid.anchor.iter().enumerate() {
                let parsed: Result<Vec<_>> = row
                    .iter()
                    .enumerate()
                    .map(|(i, s)| r.poly(s, &format!("algebroid.anchor[{}][{}]", a + 1, i + 1)))
                    .collect();
                rows.push(parsed?);
            }
            rows
        };
        let st = &self.algebroid.structure;
        if st.len() != d || st.iter().any(|m| m.len() != d || m.iter().any(|row| row.len() != d)) {
            return Err(Error::parse("algebroid.structure", format!("expected a {d}x{d}x{d} array")));
        }
        let mut structure = Vec::new();
        for (c, m) in st.iter().enumerate() {
            structure.push(r.skew(m, &format!("algebroid.structure[{}]", c + 1))?.to_rows());
        }
        let spec = AlgebroidSpec::new(space, anchor, structure)?;
        let mut inst = Instance::new(spec);
        for (name, t) in &self.tensors {
            let field = format!("tensors.{name}");
            match t {
                TensorFile::Endomorphism { matrix } => {
                    inst.matrices.insert(name.clone(), r.matrix(matrix, &field)?);
                }
                TensorFile::Bivector { matrix } => {
                    inst.elements.insert(name.clone(), bivector(&r.skew(matrix, &field)?)?);
                }
                TensorFile::Form2 { matrix } => {
                    inst.elements.insert(name.clone(), form2(&r.skew(matrix, &field)?)?);
                }
                TensorFile::Form3 { components } => {
                    inst.elements.insert(name.clone(), r.form3(components, &field)?);
                }
            }
        }
        for (name, terms) in &self.elements {
            if self.tensors.contains_key(name) {
                return Err(Error::parse(format!("elements.{name}"), "name already used by a tensor"));
            }
            inst.elements.insert(name.clone(), r.terms(terms, &format!("elements.{name}"))?);
        }
        inst.seed = self.seed;
        inst.profile = self.profile.clone();
        Ok(inst)
    }

    /// Canonical file for an instance: constant-coefficient bivectors,
    /// 2-forms and 3-forms become typed tensors, anything else a term list.
    pub fn from_instance(inst: &Instance) -> Result<Self> {
        let space = inst.space();
        let d = space.rank();
        let spec = &inst.spec;
        let anchor = spec.anchor().iter().map(|row| row.iter().map(poly_string).collect::<Result<Vec<_>>>());
        let anchor = anchor.collect::<Result<Vec<_>>>()?;
        let structure = spec
            .structure()
            .iter()
            .map(|m| m.iter().map(|row| row.iter().map(poly_string).collect::<Result<Vec<_>>>()).collect())
            .collect::<Result<Vec<_>>>()?;
        let mut tensors = BTreeMap::new();
        let mut elements = BTreeMap::new();
        for (name, m) in &inst.matrices {
            tensors.insert(name.clone(), TensorFile::Endomorphism { matrix: matrix_strings(m)? });
        }
        for (name, e) in &inst.elements {
            if inst.matrices.contains_key(name) {
                return Err(Error::parse(name.clone(), "name used by both a matrix and an element"));
            }
            let typed = match e.bidegree() {
                Some((2, 0)) => bivector_components(e).ok().map(|m| matrix_strings(&m).map(|matrix| TensorFile::Bivector { matrix })),
                Some((0, 2)) => form2_components(e).ok().map(|m| matrix_strings(&m).map(|matrix| TensorFile::Form2 { matrix })),
                Some((0, 3)) if e.odd_coefficients().keys().all(|&mask| mask < (1 << d)) => {
                    Some(form3_components(e).map(|components| TensorFile::Form3 { components }))
                }
                _ => None,
            };
            match typed {
                Some(t) => {
                    tensors.insert(name.clone(), t?);
                }
                None => {
                    elements.insert(name.clone(), element_terms(e)?);
                }
            }
        }
        Ok(InstanceFile {
            base_dim: space.base_dim(),
            rank: d,
            coefficients: CoefficientMode::Rational,
            algebroid: AlgebroidFile {
                anchor: if space.base_dim() == 0 { Vec::new() } else { anchor },
                structure,
            },
            tensors,
            elements,
            seed: inst.seed,
            profile: inst.profile.clone(),
        })
    }
}

fn json_error(e: serde_json::Error) -> Error {
    Error::parse(format!("line {}, column {}", e.line(), e.column()), e.to_string())
}

fn poly_string(e: &Element) -> Result<String> {
    format_polynomial(e)
}

fn matrix_strings(m: &RMatrix) -> Result<Vec<Vec<String>>> {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| poly_string(m.get(i, j))).collect()).collect()
}

fn form3_components(h: &Element) -> Result<Vec<ComponentFile>> {
    let d = h.space().rank();
    h.odd_coefficients()
        .into_iter()
        .map(|(mask, c)| {
            let indices = (0..d).filter(|a| mask & (1 << a) != 0).map(|a| a + 1).collect();
            Ok(ComponentFile { indices, value: poly_string(&c)? })
        })
        .collect()
}

/// Term list of an arbitrary element (1-based odd indices).
pub fn element_terms<S: crate::Scalar>(e: &GradedElement<S>) -> Result<Vec<TermFile>> {
    let d = e.space().rank();
    Ok(e
        .terms()
        .map(|(k, c)| TermFile {
            coefficient: c.to_string(),
            x: if k.x_exponents().iter().all(|&v| v == 0) { Vec::new() } else { k.x_exponents().to_vec() },
            p: if k.p_exponents().iter().all(|&v| v == 0) { Vec::new() } else { k.p_exponents().to_vec() },
            xi: k.xi_indices(d).into_iter().map(|a| a + 1).collect(),
            theta: k.theta_indices(d).into_iter().map(|a| a + 1).collect(),
        })
        .collect())
}

/// Serialized form of a matrix witness.
pub fn matrix_terms<S: crate::Scalar>(m: &Matrix<S>) -> Vec<Vec<String>> {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| m.get(i, j).to_string()).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_instance, Profile};
    use crate::Rational;

    const AFF1: &str = r#"{
  "base_dim": 0,
  "rank": 2,
  "algebroid": { "structure": [[["0","0"],["0","0"]], [["0","1"],["-1","0"]]] },
  "tensors": {
    "pi": { "kind": "bivector", "matrix": [["0","1"],["-1","0"]] },
    "omega": { "kind": "2-form", "matrix": [["0","1"],["-1","0"]] }
  }
}"#;

    #[test]
    fn aff1_file_parses_to_aff1() {
        let f = InstanceFile::from_json(AFF1).unwrap();
        let inst = f.to_instance().unwrap();
        let aff = AlgebroidSpec::<Rational>::aff1();
        assert_eq!(inst.mu(), crate::mu_from_spec(aff.space(), &aff).unwrap());
        let s = inst.space();
        assert_eq!(inst.element("pi").unwrap(), &(&s.theta(0) * &s.theta(1)));
    }

    #[test]
    fn antisymmetry_is_validated() {
        let bad = AFF1.replace(r#"[["0","0"],["0","0"]], [["0","1"]"#, r#"[["1","0"],["0","0"]], [["0","1"]"#);
        let err = InstanceFile::from_json(&bad).unwrap().to_instance().unwrap_err();
        assert!(err.to_string().contains("structure[1][1][1]"), "{err}");
        let bad = AFF1.replace(r#""matrix": [["0","1"],["-1","0"]] },
    "omega""#, r#""matrix": [["0","1"],["1","0"]] },
    "omega""#);
        assert!(InstanceFile::from_json(&bad).unwrap().to_instance().is_err());
    }

    #[test]
    fn random_instances_round_trip() {
        for seed in 0..20 {
            for profile in [Profile::LieAlgebraSolvable, Profile::TensorsOnFixedMu] {
                let inst = random_instance(seed, profile, 3, (seed % 2) as usize).unwrap();
                let file = InstanceFile::from_instance(&inst).unwrap();
                let text = file.to_json();
                let back = InstanceFile::from_json(&text).unwrap();
                assert_eq!(back, file);
                assert_eq!(back.to_json(), text);
                assert_eq!(back.to_instance().unwrap(), inst);
            }
        }
    }

    #[test]
    fn raw_terms_round_trip() {
        let s = PhaseSpace::new(1, 2).unwrap();
        let e = &(&s.p::<Rational>(0) * &s.theta(1)) + &(&(&s.x(0) * &s.xi(1)) * &s.xi(0)).scale_int(3);
        let terms = element_terms(&e).unwrap();
        let r = Reader { space: s, mode: CoefficientMode::Rational };
        assert_eq!(r.terms(&terms, "t").unwrap(), e);
        let swapped = vec![TermFile { coefficient: "1".into(), x: vec![], p: vec![], xi: vec![2, 1], theta: vec![] }];
        assert_eq!(r.terms(&swapped, "t").unwrap(), &s.xi(1) * &s.xi(0));
        let bad = vec![TermFile { coefficient: "1".into(), x: vec![], p: vec![], xi: vec![3], theta: vec![] }];
        assert!(r.terms(&bad, "t").is_err());
    }
}
