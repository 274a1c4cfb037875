//! Fixed problem suite shared by the integration tests.

#![allow(dead_code)]

use induced_pressure::{InducedProblem, LocallyConstantPotential, Sft};

pub struct Case {
    pub name: &'static str,
    pub problem: InducedProblem,
}

impl Case {
    pub fn mixing(&self) -> bool {
        self.problem.sft().is_mixing()
    }
}

fn symbols(sft: &Sft, values: &[f64]) -> LocallyConstantPotential {
    LocallyConstantPotential::from_symbol_values(sft, values).unwrap()
}

fn case(name: &'static str, sft: Sft, phi: LocallyConstantPotential, psi: LocallyConstantPotential) -> Case {
    Case {
        name,
        problem: InducedProblem::new(sft, phi, psi).unwrap(),
    }
}

pub fn golden_unit() -> Case {
    let gm = Sft::golden_mean();
    case(
        "golden-unit",
        gm.clone(),
        symbols(&gm, &[0.0, 0.0]),
        symbols(&gm, &[1.0, 1.0]),
    )
}

pub fn moran() -> Case {
    let full = Sft::full(2).unwrap();
    case(
        "moran",
        full.clone(),
        symbols(&full, &[0.0, 0.0]),
        symbols(&full, &[2f64.ln(), 4f64.ln()]),
    )
}

/// Zero-pressure Bernoulli weights; `psi = 2` keeps `beta* = 0`.
pub fn bernoulli() -> Case {
    let full = Sft::full(2).unwrap();
    case(
        "bernoulli",
        full.clone(),
        symbols(&full, &[0.3f64.ln(), 0.7f64.ln()]),
        symbols(&full, &[2.0, 2.0]),
    )
}

pub fn fair_coin() -> Case {
    let full = Sft::full(2).unwrap();
    case(
        "fair-coin",
        full.clone(),
        symbols(&full, &[0.0, 0.0]),
        symbols(&full, &[1.0, 1.0]),
    )
}

pub fn golden_pairs() -> Case {
    let gm = Sft::golden_mean();
    let phi = LocallyConstantPotential::from_fn(&gm, 2, |w| match (w[0], w[1]) {
        (0, 0) => 0.5,
        (0, 1) => -0.25,
        _ => 1.0,
    })
    .unwrap();
    case("golden-pairs", gm.clone(), phi, symbols(&gm, &[1.0, 2.0]))
}

pub fn three_state() -> Case {
    let sft = Sft::new(&[vec![1, 1, 0], vec![0, 1, 1], vec![1, 1, 1]]).unwrap();
    let phi = LocallyConstantPotential::from_fn(&sft, 2, |w| 0.3 * w[0] as f64 - 0.2 * w[1] as f64 + 0.1).unwrap();
    let psi = LocallyConstantPotential::from_fn(&sft, 2, |w| 1.5 + 0.25 * (w[0] + 2 * w[1]) as f64 / 1.5).unwrap();
    case("three-state", sft, phi, psi)
}

/// Memory-3 `psi`, so every measure-side computation runs on the block shift.
pub fn golden_triples() -> Case {
    let gm = Sft::golden_mean();
    let phi = symbols(&gm, &[0.2, -0.3]);
    let psi = LocallyConstantPotential::from_fn(&gm, 3, |w| 1.0 + 0.5 * w[0] as f64 + 0.25 * w[2] as f64).unwrap();
    case("golden-triples", gm, phi, psi)
}

pub fn single_symbol() -> Case {
    let one = Sft::full(1).unwrap();
    case(
        "single-symbol",
        one.clone(),
        symbols(&one, &[0.7]),
        symbols(&one, &[1.3]),
    )
}

/// Period 2; irreducible but not mixing.
pub fn flip() -> Case {
    let flip = Sft::new(&[vec![0, 1], vec![1, 0]]).unwrap();
    case(
        "flip",
        flip.clone(),
        symbols(&flip, &[0.4, -0.1]),
        symbols(&flip, &[1.0, 3.0]),
    )
}

pub fn suite() -> Vec<Case> {
    vec![
        golden_unit(),
        moran(),
        bernoulli(),
        fair_coin(),
        golden_pairs(),
        three_state(),
        golden_triples(),
        single_symbol(),
        flip(),
    ]
}

pub fn mixing_suite() -> Vec<Case> {
    suite().into_iter().filter(Case::mixing).collect()
}
