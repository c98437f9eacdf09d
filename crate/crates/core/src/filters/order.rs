//! Ordering and counting constraints on the geometric parameters.

use crate::params::GeometricArray;

use super::verdict::CheckVerdict;

/// Monotonicity, sum and size constraints on `phi`, `tau`, with `s = beta`.
pub fn check_order_constraints(geo: &GeometricArray) -> Vec<CheckVerdict> {
    let d = geo.diameter();
    let s = geo.beta();
    let r = geo.r();
    let phi1 = if d >= 2 { geo.phi(1) } else { 0 };
    let c2 = geo.c2().unwrap_or(0);
    let mut out = Vec::new();

    if d >= 2 && c2 >= 2 {
        out.push(CheckVerdict::ge("tau2_ge_phi1", geo.tau(2), phi1));
        out.push(CheckVerdict::lt("d_lt_r_squared", d as i64, r * r).with("r", r));
    } else {
        out.push(CheckVerdict::not_applicable("tau2_ge_phi1", "needs D >= 2 and c_2 >= 2"));
        out.push(CheckVerdict::not_applicable("d_lt_r_squared", "needs D >= 2 and c_2 >= 2"));
    }

    if d >= 2 && phi1 > 1 {
        let chain: Vec<i64> = geo.phis().to_vec();
        let bad = (1..d).find(|&j| chain[j] <= chain[j - 1]);
        let v = match bad {
            Some(j) => CheckVerdict::compare(
                "phi_increasing",
                format!("phi_{j} = {}", chain[j]),
                ">",
                format!("phi_{} = {}", j - 1, chain[j - 1]),
                false,
            ),
            None => CheckVerdict::compare("phi_increasing", fmt_chain(&chain), "strictly increasing", "", true),
        };
        out.push(v);
        out.push(CheckVerdict::le("d_le_s", d as i64, s));
    } else {
        out.push(CheckVerdict::not_applicable("phi_increasing", "needs D >= 2 and phi_1 > 1"));
        out.push(CheckVerdict::not_applicable("d_le_s", "needs D >= 2 and phi_1 > 1"));
    }

    if d >= 2 && phi1 >= 2 {
        // phi_1 <= tau_2 < tau_3 < ... < tau_D
        let v = if phi1 > geo.tau(2) {
            CheckVerdict::le("tau_increasing", phi1, geo.tau(2)).note("phi_1 <= tau_2")
        } else if let Some(i) = (3..=d).find(|&i| geo.tau(i) <= geo.tau(i - 1)) {
            CheckVerdict::compare(
                "tau_increasing",
                format!("tau_{i} = {}", geo.tau(i)),
                ">",
                format!("tau_{} = {}", i - 1, geo.tau(i - 1)),
                false,
            )
        } else {
            let mut chain = vec![phi1];
            chain.extend_from_slice(&geo.taus()[1..]);
            CheckVerdict::compare("tau_increasing", fmt_chain(&chain), "phi_1 <= tau_2 < ... < tau_D", "", true)
        };
        out.push(v);
    } else {
        out.push(CheckVerdict::not_applicable("tau_increasing", "needs D >= 2 and phi_1 >= 2"));
    }

    if d >= 2 {
        // the binding pair is the one with the largest sum
        let (i, j) = max_pair((1..d).flat_map(|i| (i..=d - i).map(move |j| (i, j))), |i, j| geo.tau(i) + geo.tau(j))
            .unwrap();
        out.push(
            CheckVerdict::le("tau_sum", geo.tau(i) + geo.tau(j), r)
                .with("i", i)
                .with("j", j),
        );
    } else {
        out.push(CheckVerdict::not_applicable("tau_sum", "needs D >= 2"));
    }

    let phi_pairs: Vec<(usize, usize)> = (1..d).flat_map(|i| (i..d).filter(move |j| i + j < d).map(move |j| (i, j))).collect();
    match max_pair(phi_pairs.into_iter(), |i, j| geo.phi(i) + geo.phi(j)) {
        Some((i, j)) => out.push(
            CheckVerdict::le("phi_sum", geo.phi(i) + geo.phi(j), s + 1)
                .with("i", i)
                .with("j", j),
        ),
        None => out.push(CheckVerdict::not_applicable("phi_sum", "needs a pair i + j <= D - 1, so D >= 3")),
    }

    if d >= 3 {
        out.push(CheckVerdict::le("phi1_half", 2 * phi1, s + 1).note("2 phi_1 <= s + 1 since D >= 3"));
    } else {
        out.push(CheckVerdict::not_applicable("phi1_half", "needs D >= 3"));
    }
    out
}

fn max_pair(pairs: impl Iterator<Item = (usize, usize)>, f: impl Fn(usize, usize) -> i64) -> Option<(usize, usize)> {
    let mut best: Option<((usize, usize), i64)> = None;
    for (i, j) in pairs {
        let v = f(i, j);
        if best.is_none_or(|(_, b)| v > b) {
            best = Some(((i, j), v));
        }
    }
    best.map(|(p, _)| p)
}

fn fmt_chain(v: &[i64]) -> String {
    v.iter().map(i64::to_string).collect::<Vec<_>>().join(",")
}
