//! Homomorphisms given by their values on generators.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::{StarAlgebra, StarError, StarPoly, Word};
use crate::report::Report;

/// Images of the generators `e_{1,j} ⊗ 1` (j ≥ 2), `e_{j,j} ⊗ 1` and
/// `e_{1,1} ⊗ s_m`, keyed `"e[1,j]x1"`, `"e[j,j]x1"`, `"e[1,1]xs[m]"`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorMap {
    alg: StarAlgebra,
    images: BTreeMap<String, StarPoly>,
}

/// File form: either a bare object of `key: expression` pairs (the algebra
/// size is read off the keys) or `{"r": .., "n": .., "images": {..}}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GeneratorMapFile {
    Sized { r: usize, n: usize, images: BTreeMap<String, String> },
    Bare(BTreeMap<String, String>),
}

/// Generator keys of `M_r ⊗ O_n`, in table order.
pub fn generator_keys(r: usize, n: usize) -> Vec<String> {
    let mut keys: Vec<String> = (1..=r).map(|j| format!("e[{j},{j}]x1")).collect();
    keys.extend((2..=r).map(|j| format!("e[1,{j}]x1")));
    keys.extend((1..=n).map(|m| format!("e[1,1]xs[{m}]")));
    keys
}

/// The element named by a generator key.
pub fn generator_element(alg: &StarAlgebra, key: &str) -> Result<StarPoly, StarError> {
    let bad = || StarError::Map(format!("unknown generator key \"{key}\""));
    let (e, t) = key.split_once('x').ok_or_else(bad)?;
    let base = alg.parse(e).map_err(|_| bad())?;
    let tensor = if t == "1" { alg.one() } else { alg.parse(t).map_err(|_| bad())? };
    alg.mul(&base, &tensor)
}

impl GeneratorMap {
    /// Parses the image expressions; the key set must be exactly
    /// [`generator_keys`] for the given size.
    pub fn new(alg: StarAlgebra, exprs: &BTreeMap<String, String>) -> Result<Self, StarError> {
        let want = generator_keys(alg.r, alg.n);
        for k in exprs.keys() {
            if !want.contains(k) {
                return Err(StarError::Map(format!("unexpected generator key \"{k}\"")));
            }
        }
        let mut images = BTreeMap::new();
        for k in want {
            let text = exprs.get(&k).ok_or_else(|| StarError::Map(format!("missing generator key \"{k}\"")))?;
            let p = alg.parse(text).map_err(|e| StarError::Map(format!("{k}: {e}")))?;
            images.insert(k, p);
        }
        Ok(GeneratorMap { alg, images })
    }

    /// Reads the file form; a bare map takes its size from the largest
    /// indices among the keys.
    pub fn from_file(file: &GeneratorMapFile, term_cap: usize) -> Result<Self, StarError> {
        let (r, n, exprs) = match file {
            GeneratorMapFile::Sized { r, n, images } => (*r, *n, images),
            GeneratorMapFile::Bare(images) => {
                let r = images
                    .keys()
                    .filter_map(|k| k.strip_prefix("e[").and_then(|k| k.split(']').next()))
                    .flat_map(|ij| ij.split(',').filter_map(|x| x.parse::<usize>().ok()).collect::<Vec<_>>())
                    .max()
                    .unwrap_or(1);
                let n = images
                    .keys()
                    .filter_map(|k| k.split_once("xs[").and_then(|(_, m)| m.trim_end_matches(']').parse::<usize>().ok()))
                    .max()
                    .unwrap_or(0);
                (r, n, images)
            }
        };
        if r < 1 || n < 2 {
            return Err(StarError::Map(format!("cannot use M_{r} ⊗ O_{n}: need r ≥ 1 and n ≥ 2")));
        }
        GeneratorMap::new(StarAlgebra::new(r, n).with_term_cap(term_cap), exprs)
    }

    pub fn identity(alg: StarAlgebra) -> Self {
        let images = generator_keys(alg.r, alg.n)
            .into_iter()
            .map(|k| {
                let p = generator_element(&alg, &k).expect("valid key");
                (k, p)
            })
            .collect();
        GeneratorMap { alg, images }
    }

    pub fn algebra(&self) -> &StarAlgebra {
        &self.alg
    }

    pub fn image(&self, key: &str) -> Option<&StarPoly> {
        self.images.get(key)
    }

    /// Replaces one image.
    pub fn with_image(&self, key: &str, p: StarPoly) -> Result<Self, StarError> {
        if !self.images.contains_key(key) {
            return Err(StarError::Map(format!("unknown generator key \"{key}\"")));
        }
        let mut out = self.clone();
        out.images.insert(key.to_string(), p);
        Ok(out)
    }

    fn f1(&self, j: usize) -> &StarPoly {
        let key = if j == 1 { "e[1,1]x1".to_string() } else { format!("e[1,{j}]x1") };
        &self.images[&key]
    }

    fn v(&self, m: usize) -> &StarPoly {
        &self.images[&format!("e[1,1]xs[{m}]")]
    }

    fn fjj(&self, j: usize) -> &StarPoly {
        &self.images[&format!("e[{j},{j}]x1")]
    }

    /// Applies a named test mutation:
    ///
    /// * `swap-v<a>-v<b>`: exchange the images of `e[1,1]xs[a]` and `e[1,1]xs[b]`
    /// * `drop:<key>`: remove the last term of that image
    /// * `zero:<key>`: send that generator to 0
    /// * `negate:<key>`: negate that image
    pub fn mutate(&self, spec: &str) -> Result<Self, StarError> {
        let bad = || StarError::Map(format!("unknown mutation \"{spec}\""));
        if let Some(rest) = spec.strip_prefix("swap-v") {
            let (a, b) = rest.split_once("-v").ok_or_else(bad)?;
            let (a, b): (usize, usize) = (a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?);
            let (ka, kb) = (format!("e[1,1]xs[{a}]"), format!("e[1,1]xs[{b}]"));
            let (pa, pb) = match (self.images.get(&ka), self.images.get(&kb)) {
                (Some(pa), Some(pb)) => (pa.clone(), pb.clone()),
                _ => return Err(bad()),
            };
            return self.with_image(&ka, pb)?.with_image(&kb, pa);
        }
        let (op, key) = spec.split_once(':').ok_or_else(bad)?;
        let current = self.images.get(key).ok_or_else(bad)?;
        let changed = match op {
            "zero" => self.alg.zero(),
            "negate" => self.alg.neg(current),
            "drop" => {
                let mut terms: Vec<(Word, BigInt)> =
                    current.terms().iter().map(|(w, c)| (w.clone(), c.clone())).collect();
                terms.pop();
                self.alg.from_terms(terms)?
            }
            _ => return Err(bad()),
        };
        self.with_image(key, changed)
    }
}

/// Extends the map to any element:
/// `φ(e_{jk} ⊗ s_μ s_ν*) = φ(e_{j1}) · Π φ(e₁₁⊗s_{μₜ}) · (Π φ(e₁₁⊗s_{νₜ}))* · φ(e_{1k})`
/// with `φ(e_{j1}) = φ(e_{1j})*`.
pub fn apply_hom(map: &GeneratorMap, p: &StarPoly) -> Result<StarPoly, StarError> {
    let alg = &map.alg;
    if (p.r(), p.n()) != (alg.r, alg.n) {
        return Err(StarError::DimensionMismatch(format!(
            "map is defined on M_{} ⊗ O_{}, element lives in M_{} ⊗ O_{}",
            alg.r,
            alg.n,
            p.r(),
            p.n()
        )));
    }
    let left: Vec<StarPoly> =
        (1..=alg.r).map(|j| alg.adjoint(map.f1(j))).collect::<Result<_, _>>()?;
    let mut out = alg.zero();
    for (w, c) in p.terms() {
        let mu = alg.product(w.mu.iter().map(|&m| map.v(m)))?;
        let nu = alg.adjoint(&alg.product(w.nu.iter().map(|&m| map.v(m)))?)?;
        let word_image = alg.product([&left[w.j - 1], &mu, &nu, map.f1(w.k)])?;
        out = alg.add(&out, &alg.scale(&word_image, c))?;
    }
    Ok(out)
}

/// Relations that make the generator images define a homomorphism:
/// projections `f_{jj}` that are orthogonal and sum to 1; `f_{1j}` partial
/// isometries from `f_{jj}` onto `f_{11}`; isometries `v_m` on `f_{11}` with
/// ranges summing to `f_{11}`.
pub fn verify_relations(map: &GeneratorMap) -> Result<Report, StarError> {
    let alg = &map.alg;
    let mut rep = Report::new();
    let eq = |a: &StarPoly, b: &StarPoly| alg.equal(a, b);

    for j in 1..=alg.r {
        let f = map.fjj(j);
        let ok = eq(&alg.adjoint(f)?, f)? && eq(&alg.mul(f, f)?, f)?;
        rep.push(format!("f[{j},{j}] is a projection"), ok, "");
    }
    for i in 1..=alg.r {
        for j in i + 1..=alg.r {
            let ok = alg.mul(map.fjj(i), map.fjj(j))?.is_zero();
            rep.push(format!("f[{i},{i}] f[{j},{j}] = 0"), ok, "");
        }
    }
    let mut sum = alg.zero();
    for j in 1..=alg.r {
        sum = alg.add(&sum, map.fjj(j))?;
    }
    let names: Vec<String> = (1..=alg.r).map(|j| format!("f[{j},{j}]")).collect();
    rep.push(format!("{} = 1", names.join(" + ")), eq(&sum, &alg.one())?, "");

    let f11 = map.fjj(1);
    rep.push("image of e[1,1]x1 is f[1,1]", eq(map.f1(1), f11)?, "");
    for j in 2..=alg.r {
        let f = map.f1(j);
        let fs = alg.adjoint(f)?;
        rep.push(format!("f[1,{j}] f[1,{j}]* = f[1,1]"), eq(&alg.mul(f, &fs)?, f11)?, "");
        rep.push(format!("f[1,{j}]* f[1,{j}] = f[{j},{j}]"), eq(&alg.mul(&fs, f)?, map.fjj(j))?, "");
    }

    let mut range_sum = alg.zero();
    for m in 1..=alg.n {
        let v = map.v(m);
        let vs = alg.adjoint(v)?;
        rep.push(format!("v[{m}]* v[{m}] = f[1,1]"), eq(&alg.mul(&vs, v)?, f11)?, "");
        range_sum = alg.add(&range_sum, &alg.mul(v, &vs)?)?;
    }
    rep.push(format!("sum of v[m] v[m]* for m = 1..{} equals f[1,1]", alg.n), eq(&range_sum, f11)?, "");
    Ok(rep)
}

/// `φ(φ(g)) = g` for every generator in the table.
pub fn verify_involutive(map: &GeneratorMap) -> Result<Report, StarError> {
    let alg = &map.alg;
    let mut rep = Report::new();
    for key in generator_keys(alg.r, alg.n) {
        let g = generator_element(alg, &key)?;
        let twice = apply_hom(map, &apply_hom(map, &g)?)?;
        let ok = alg.equal(&twice, &g)?;
        let detail = if ok { String::new() } else { format!("got {twice}") };
        rep.push(format!("phi(phi({key})) = {key}"), ok, detail);
    }
    Ok(rep)
}

/// The order-two automorphism of `M_3 ⊗ O_4` given by this table.
pub const EXAMPLE5: [(&str, &str); 9] = [
    ("e[1,1]x1", "e[2,2] + e[3,3]"),
    ("e[2,2]x1", "e[1,1] (s[1] s[1]* + s[2] s[2]*)"),
    ("e[3,3]x1", "e[1,1] (s[3] s[3]* + s[4] s[4]*)"),
    ("e[1,2]x1", "e[2,1] s[1]* + e[3,1] s[2]*"),
    ("e[1,3]x1", "e[2,1] s[3]* + e[3,1] s[4]*"),
    ("e[1,1]xs[1]", "e[2,2] s[1] + e[2,3] s[2]"),
    ("e[1,1]xs[2]", "e[2,2] s[3] + e[2,3] s[4]"),
    ("e[1,1]xs[3]", "e[3,2] s[1] + e[3,3] s[2]"),
    ("e[1,1]xs[4]", "e[3,2] s[3] + e[3,3] s[4]"),
];

pub fn example5(term_cap: usize) -> GeneratorMap {
    let exprs: BTreeMap<String, String> =
        EXAMPLE5.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
    GeneratorMap::new(StarAlgebra::new(3, 4).with_term_cap(term_cap), &exprs).expect("built-in table parses")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::staralg::DEFAULT_TERM_CAP;

    #[test]
    fn keys_in_table_order() {
        assert_eq!(
            generator_keys(3, 4),
            [
                "e[1,1]x1", "e[2,2]x1", "e[3,3]x1", "e[1,2]x1", "e[1,3]x1", "e[1,1]xs[1]", "e[1,1]xs[2]",
                "e[1,1]xs[3]", "e[1,1]xs[4]"
            ]
        );
        assert_eq!(EXAMPLE5.map(|(k, _)| k).to_vec(), generator_keys(3, 4));
    }

    #[test]
    fn example5_images() {
        let map = example5(DEFAULT_TERM_CAP);
        let alg = *map.algebra();
        let s1 = alg.parse("e[1,1] s[1]").unwrap();
        assert_eq!(apply_hom(&map, &s1).unwrap(), alg.parse("e[2,2] s[1] + e[2,3] s[2]").unwrap());
        assert_eq!(apply_hom(&map, &alg.e(1, 1).unwrap()).unwrap(), alg.parse("e[2,2] + e[3,3]").unwrap());
        // the unit goes to the unit
        assert_eq!(apply_hom(&map, &alg.one()).unwrap(), alg.one());
    }

    #[test]
    fn example5_passes() {
        let map = example5(DEFAULT_TERM_CAP);
        let rel = verify_relations(&map).unwrap();
        assert!(rel.all_passed(), "{rel}");
        let inv = verify_involutive(&map).unwrap();
        assert!(inv.all_passed(), "{inv}");
        assert_eq!(inv.checks.len(), 9);
    }

    #[test]
    fn identity_map_passes() {
        for (r, n) in [(1, 2), (2, 3), (3, 4)] {
            let map = GeneratorMap::identity(StarAlgebra::new(r, n));
            assert!(verify_relations(&map).unwrap().all_passed());
            assert!(verify_involutive(&map).unwrap().all_passed());
            let alg = *map.algebra();
            let p = alg.parse("e[1,1] s[1] s[2]* + 3 s[2]").unwrap();
            assert_eq!(apply_hom(&map, &p).unwrap(), p);
        }
    }

    #[test]
    fn flip_on_m2_o2() {
        // exchange s₁ and s₂ inside the corner e₁₁
        let alg = StarAlgebra::new(2, 2);
        let map = GeneratorMap::identity(alg)
            .with_image("e[1,1]xs[1]", alg.parse("e[1,1] s[2]").unwrap())
            .unwrap()
            .with_image("e[1,1]xs[2]", alg.parse("e[1,1] s[1]").unwrap())
            .unwrap();
        assert!(verify_relations(&map).unwrap().all_passed());
        assert!(verify_involutive(&map).unwrap().all_passed());
    }

    #[test]
    fn swapped_v2_v3_breaks_involutivity_only() {
        let map = example5(DEFAULT_TERM_CAP).mutate("swap-v2-v3").unwrap();
        let rel = verify_relations(&map).unwrap();
        assert!(rel.all_passed(), "{rel}");
        assert!(!verify_involutive(&map).unwrap().all_passed());
    }

    #[test]
    fn single_generator_mutations_are_detected() {
        let base = example5(DEFAULT_TERM_CAP);
        for key in generator_keys(3, 4) {
            for op in ["drop", "zero", "negate"] {
                let map = base.mutate(&format!("{op}:{key}")).unwrap();
                let ok = verify_relations(&map).unwrap().all_passed() && verify_involutive(&map).unwrap().all_passed();
                assert!(!ok, "{op}:{key} went unnoticed");
            }
        }
    }

    #[test]
    fn map_file_forms() {
        let bare: GeneratorMapFile = serde_json::from_str(
            r#"{"e[1,1]x1":"e[1,1]","e[2,2]x1":"e[2,2]","e[1,2]x1":"e[1,2]","e[1,1]xs[1]":"e[1,1] s[1]","e[1,1]xs[2]":"e[1,1] s[2]"}"#,
        )
        .unwrap();
        let map = GeneratorMap::from_file(&bare, DEFAULT_TERM_CAP).unwrap();
        assert_eq!((map.algebra().r, map.algebra().n), (2, 2));
        assert_eq!(map, GeneratorMap::identity(StarAlgebra::new(2, 2)));

        let missing: GeneratorMapFile =
            serde_json::from_str(r#"{"r":2,"n":2,"images":{"e[1,1]x1":"e[1,1]"}}"#).unwrap();
        assert!(matches!(GeneratorMap::from_file(&missing, DEFAULT_TERM_CAP), Err(StarError::Map(_))));
        assert!(base_mutation_errors());
    }

    fn base_mutation_errors() -> bool {
        let base = example5(DEFAULT_TERM_CAP);
        base.mutate("swap-v1-v9").is_err() && base.mutate("frobnicate").is_err() && base.mutate("drop:e[9,9]x1").is_err()
    }
}
