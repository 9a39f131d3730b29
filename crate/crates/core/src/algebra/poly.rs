//! Dense polynomials over a finite field, constant term first.

use super::{increment, Algebra, Elem};

fn trim(p: &mut Vec<Elem>) {
    while p.len() > 1 && *p.last().unwrap() == 0 {
        p.pop();
    }
}

pub(crate) fn mul(field: &Algebra, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = field.add(out[i + j], field.mul(x, y));
        }
    }
    trim(&mut out);
    out
}

/// Remainder of `a` modulo the monic polynomial `m`.
pub(crate) fn rem(field: &Algebra, a: &[Elem], m: &[Elem]) -> Vec<Elem> {
    let dm = m.len() - 1;
    let mut r = a.to_vec();
    trim(&mut r);
    while r.len() > dm && !(r.len() == 1 && r[0] == 0) {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        for (i, &c) in m.iter().enumerate() {
            r[shift + i] = field.sub(r[shift + i], field.mul(lead, c));
        }
        r.pop();
        trim(&mut r);
    }
    r
}

fn is_zero(p: &[Elem]) -> bool {
    p.iter().all(|&c| c == 0)
}

/// Exhaustive factor test: no monic polynomial of degree `1..=deg/2` divides `p`.
pub(crate) fn is_irreducible(field: &Algebra, p: &[Elem]) -> bool {
    let deg = p.len() - 1;
    for d in 1..=deg / 2 {
        let mut low = vec![0; d];
        loop {
            let mut divisor: Vec<Elem> = low.iter().rev().copied().collect();
            divisor.push(1);
            if is_zero(&rem(field, p, &divisor)) {
                return false;
            }
            if !increment(&mut low, field.size()) {
                break;
            }
        }
    }
    true
}

/// Lexicographically smallest monic irreducible polynomial of degree `deg`.
///
/// Candidates are ordered by their non-leading coefficients read as a
/// base-`q` integer with the constant term least significant.
pub(crate) fn smallest_irreducible(field: &Algebra, deg: usize) -> Vec<Elem> {
    // high-to-low so that `increment` walks the integer order
    let mut high_to_low = vec![0; deg];
    loop {
        let mut p: Vec<Elem> = high_to_low.iter().rev().copied().collect();
        p.push(1);
        if is_irreducible(field, &p) {
            return p;
        }
        if !increment(&mut high_to_low, field.size()) {
            unreachable!("irreducible polynomials exist in every degree");
        }
    }
}
