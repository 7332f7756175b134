//! Standard orthogonal forms over GF(2), GF(3) and GF(4) in dimension at
//! most six, with the gaps classical theory assigns them.

use crate::error::Result;
use crate::field::{GaloisField, Gf};
use crate::forms::QuadraticForm;

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: String,
    pub form: QuadraticForm<GaloisField>,
    /// Expected `(n, e, p)`.
    pub expected: (usize, usize, usize),
}

/// GF(4) with modulus `x^2 + x + 1`; `omega` is the class of `x`.
pub fn gf4() -> GaloisField {
    GaloisField::extension(2, &[1, 1, 1]).expect("x^2 + x + 1 is irreducible over GF(2)")
}

const OMEGA: Gf = Gf(2);

fn entry(name: &str, field: &GaloisField, dim: usize, terms: &[(usize, usize, Gf)], expected: (usize, usize, usize)) -> CatalogEntry {
    CatalogEntry {
        name: name.to_string(),
        form: QuadraticForm::from_terms(field, dim, terms).expect("catalog forms are well formed"),
        expected,
    }
}

/// The base catalog, without random equivalents.
pub fn standard_forms() -> Vec<CatalogEntry> {
    let one = Gf::ONE;
    let gf2 = GaloisField::prime(2).expect("2 is prime");
    let gf3 = GaloisField::prime(3).expect("3 is prime");
    let gf4 = gf4();
    let hyp = |k: usize| -> Vec<(usize, usize, Gf)> { (0..k).map(|i| (2 * i, 2 * i + 1, one)).collect() };
    let with = |mut base: Vec<(usize, usize, Gf)>, extra: &[(usize, usize, Gf)]| {
        base.extend_from_slice(extra);
        base
    };
    // x^2 + xy + y^2 is anisotropic over GF(2); x^2 + xy + omega y^2 over GF(4).
    let aniso2 = |i: usize| [(i, i, one), (i, i + 1, one), (i + 1, i + 1, one)];
    let aniso4 = |i: usize| [(i, i, one), (i, i + 1, one), (i + 1, i + 1, OMEGA)];
    // x^2 + y^2 is anisotropic over GF(3) since -1 is not a square.
    let aniso3 = |i: usize| [(i, i, one), (i + 1, i + 1, one)];

    vec![
        entry("Q+(1,2)", &gf2, 2, &hyp(1), (1, 0, 0)),
        entry("Q(2,2)", &gf2, 3, &with(vec![(0, 0, one)], &[(1, 2, one)]), (1, 0, 1)),
        entry("Q-(3,2)", &gf2, 4, &with(hyp(1), &aniso2(2)), (1, 2, 0)),
        entry("Q+(3,2)", &gf2, 4, &hyp(2), (2, 0, 0)),
        entry("Q(4,2)", &gf2, 5, &with(vec![(0, 0, one)], &[(1, 2, one), (3, 4, one)]), (2, 0, 1)),
        entry("Q-(5,2)", &gf2, 6, &with(hyp(2), &aniso2(4)), (2, 2, 0)),
        entry("Q+(5,2)", &gf2, 6, &hyp(3), (3, 0, 0)),
        entry("Q(2,3)", &gf3, 3, &with(hyp(1), &[(2, 2, one)]), (1, 1, 0)),
        entry("Q-(3,3)", &gf3, 4, &with(hyp(1), &aniso3(2)), (1, 2, 0)),
        entry("Q+(3,3)", &gf3, 4, &hyp(2), (2, 0, 0)),
        entry("Q(4,3)", &gf3, 5, &with(hyp(2), &[(4, 4, one)]), (2, 1, 0)),
        entry("Q-(5,3)", &gf3, 6, &with(hyp(2), &aniso3(4)), (2, 2, 0)),
        entry("Q+(5,3)", &gf3, 6, &hyp(3), (3, 0, 0)),
        entry("Q(2,4)", &gf4, 3, &with(vec![(0, 0, one)], &[(1, 2, one)]), (1, 0, 1)),
        entry("Q-(3,4)", &gf4, 4, &with(hyp(1), &aniso4(2)), (1, 2, 0)),
        entry("Q+(3,4)", &gf4, 4, &hyp(2), (2, 0, 0)),
        entry("Q(4,4)", &gf4, 5, &with(vec![(0, 0, one)], &[(1, 2, one), (3, 4, one)]), (2, 0, 1)),
        entry("Q-(5,4)", &gf4, 6, &with(hyp(2), &aniso4(4)), (2, 2, 0)),
        entry("Q+(5,4)", &gf4, 6, &hyp(3), (3, 0, 0)),
    ]
}

/// `count` seeded random equivalents of `entry`, named `name#k`.
pub fn equivalents(entry: &CatalogEntry, count: usize, seed: u64) -> Result<Vec<CatalogEntry>> {
    (0..count)
        .map(|k| {
            let (form, _) = entry.form.random_equivalent(seed.wrapping_add(k as u64))?;
            Ok(CatalogEntry {
                name: format!("{}#{}", entry.name, k + 1),
                form,
                expected: entry.expected,
            })
        })
        .collect()
}

/// Every standard form followed by `count` random equivalents of each.
pub fn full_catalog(count: usize, seed: u64) -> Result<Vec<CatalogEntry>> {
    let mut out = Vec::new();
    for e in standard_forms() {
        let eq = equivalents(&e, count, seed)?;
        out.push(e);
        out.extend(eq);
    }
    Ok(out)
}
