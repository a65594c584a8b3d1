use lpp_core::enumerate::{
    conjugation_histogram, count_klenian, count_report, count_t31, nset_nonempty_klenian,
    nset_nonempty_t31, normalizer_bruteforce, ExponentVector, Family, DEFAULT_GUARD,
};
use lpp_core::groups::{KlenianParams, OrderedGroup, T31Params};
use num_bigint::BigUint;

fn factorial(n: u32) -> BigUint {
    (1..=n).fold(BigUint::from(1u32), |acc, k| acc * k)
}

const T31_SMALL: [(u32, u32, u32); 6] = [(2, 2, 1), (2, 2, 2), (2, 3, 1), (2, 3, 2), (3, 2, 1), (3, 2, 2)];
const KLENIAN_SMALL: [(u32, u32, u32); 4] = [(2, 2, 1), (2, 3, 1), (2, 3, 2), (3, 2, 1)];

fn vector_families(params: &T31Params) -> Vec<Vec<ExponentVector>> {
    let all = ExponentVector::all(params);
    let mut fams = vec![Vec::new()];
    for _ in 0..params.rank() {
        let mut next = Vec::new();
        for f in &fams {
            for v in &all {
                let mut g: Vec<ExponentVector> = f.clone();
                g.push(v.clone());
                next.push(g);
            }
        }
        fams = next;
    }
    fams
}

/// Tuples `(i, j, u, v)` that may describe a conjugation of the generators.
fn klenian_tuples(params: &KlenianParams) -> Vec<(u32, u32, u32, u32)> {
    let e = params.e.min(params.n - params.e);
    let jstep = params.p.pow(params.n - 2 * e) as usize;
    let mut out = Vec::new();
    for i in 0..params.ell() {
        for j in (0..params.t()).step_by(jstep) {
            for u in 0..params.ell() {
                for v in 0..params.t() {
                    out.push((i, j, u, v));
                }
            }
        }
    }
    out
}

#[test]
fn normalizer_decomposes_over_exponent_families() {
    for (p, n, d) in T31_SMALL {
        let params = T31Params::new(p, n, d).unwrap();
        let g = OrderedGroup::t31(&params).unwrap();
        let passing = vector_families(&params)
            .iter()
            .filter(|vs| nset_nonempty_t31(vs, &params))
            .count() as u32;
        let norm = normalizer_bruteforce(&g, DEFAULT_GUARD).unwrap();
        assert_eq!(norm, BigUint::from(params.q() * passing), "({p},{n},{d})");
    }
}

#[test]
fn klenian_normalizer_decomposes_over_tuples() {
    for (p, n, e) in [(2, 2, 1), (2, 3, 1), (3, 2, 1)] {
        let params = KlenianParams::new(p, n, e).unwrap();
        let g = OrderedGroup::klenian(&params).unwrap();
        let passing = klenian_tuples(&params)
            .into_iter()
            .filter(|&(i, j, u, v)| nset_nonempty_klenian(i, j, u, v, &params).unwrap())
            .count() as u32;
        let norm = normalizer_bruteforce(&g, DEFAULT_GUARD).unwrap();
        assert_eq!(norm, BigUint::from(params.q() * passing), "({p},{n},{e})");
    }
}

#[test]
fn closed_forms_match_normalizer_oracle() {
    for (p, n, d) in T31_SMALL {
        let params = T31Params::new(p, n, d).unwrap();
        let norm = normalizer_bruteforce(&OrderedGroup::t31(&params).unwrap(), DEFAULT_GUARD).unwrap();
        let q = factorial(params.q());
        assert_eq!(count_t31(&params).unwrap(), &q * &q / norm, "({p},{n},{d})");
    }
    for (p, n, e) in KLENIAN_SMALL {
        let params = KlenianParams::new(p, n, e).unwrap();
        let norm = normalizer_bruteforce(&OrderedGroup::klenian(&params).unwrap(), DEFAULT_GUARD).unwrap();
        let q = factorial(params.q());
        assert_eq!(count_klenian(&params).unwrap(), &q * &q / norm, "({p},{n},{e})");
    }
}

#[test]
fn reports_match_for_every_small_family() {
    let families = T31_SMALL
        .iter()
        .map(|&(p, n, d)| Family::T31(T31Params::new(p, n, d).unwrap()))
        .chain(KLENIAN_SMALL.iter().map(|&(p, n, e)| Family::Klenian(KlenianParams::new(p, n, e).unwrap())));
    for f in families {
        let r = count_report(&f, true, DEFAULT_GUARD).unwrap();
        assert_eq!(r.matches, Some(true), "{f:?}");
        assert_eq!(r.oracle.as_deref(), Some(r.closed_form.as_str()));
    }
}

/// The congruence scan over `α < e` alone, without the equal-`s` case.
fn alpha_beta_scan_only(i: u32, j: u32, u: u32, v: u32, params: &KlenianParams) -> bool {
    let (p, n, e) = (params.p, params.n, params.e);
    let (ell, t) = (p.pow(e), p.pow(n - e));
    !(0..e).any(|a| {
        (0..t).any(|b| (i * p.pow(a)) % ell == (b * u) % ell && (j * p.pow(a)) % t == (b * v) % t)
    })
}

#[test]
fn alpha_scan_alone_only_errs_when_p_divides_v() {
    for (p, n, e) in [(2, 2, 1), (2, 3, 1), (3, 2, 1)] {
        let params = KlenianParams::new(p, n, e).unwrap();
        let hist = conjugation_histogram(&OrderedGroup::klenian(&params).unwrap(), DEFAULT_GUARD).unwrap();
        let ell = params.ell();
        let mut disagreements = 0;
        for (i, j, u, v) in klenian_tuples(&params) {
            let actual = hist.contains_key(&vec![i + j * ell, u + v * ell]);
            assert_eq!(nset_nonempty_klenian(i, j, u, v, &params).unwrap(), actual);
            if alpha_beta_scan_only(i, j, u, v, &params) != actual {
                assert_eq!(v % p, 0, "({i},{j},{u},{v})");
                disagreements += 1;
            }
        }
        assert!(disagreements > 0, "({p},{n},{e}) has a tuple sending b to a non-generator");
    }
}

#[test]
fn klenian_parameter_swap_gives_same_count() {
    for (p, n) in [(2, 3), (2, 5), (3, 3), (5, 4)] {
        for e in 1..n {
            let a = count_klenian(&KlenianParams::new(p, n, e).unwrap()).unwrap();
            let b = count_klenian(&KlenianParams::new(p, n, n - e).unwrap()).unwrap();
            assert_eq!(a, b);
        }
    }
}

#[test]
fn counts_divide_the_number_of_latin_tuples() {
    // Each count is q! times a number of conjugate groups, so q! divides it.
    for p in [2u32, 3, 5] {
        for n in 2..=4u32 {
            if p.pow(n) > 200 {
                continue;
            }
            let q = factorial(p.pow(n));
            for d in 1..=2 {
                let c = count_t31(&T31Params::new(p, n, d).unwrap()).unwrap();
                assert_eq!(&c % &q, BigUint::from(0u32));
            }
            for e in 1..=n / 2 {
                let c = count_klenian(&KlenianParams::new(p, n, e).unwrap()).unwrap();
                assert_eq!(&c % &q, BigUint::from(0u32));
            }
        }
    }
}
