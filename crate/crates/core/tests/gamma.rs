use polydyn_core::dynamics::{check_coordinate_laws, orbit, Norm};
use polydyn_core::{iterate, make_gamma3, make_gamma_d, rat, IterateCache, PolyMap, RangeCheck, Rational};

fn lambdas() -> [Rational; 3] {
    [rat(1, 3), rat(1, 4), rat(1, 5)]
}

fn gamma() -> PolyMap<Rational> {
    make_gamma3(&lambdas(), RangeCheck::Strict).unwrap()
}

#[test]
fn component_degree_recurrence() {
    let mut cache = IterateCache::new(gamma());
    let mut f = Vec::new();
    for n in 1..=24 {
        let it = cache.get(n).unwrap();
        let [df, dg, dh] = it.component_degrees()[..] else { unreachable!() };
        assert_eq!(dh, 1, "deg H_{n}");
        f.push((df, dg));
    }
    for n in 1..24 {
        let (df, _) = f[n - 1];
        let (df_next, dg_next) = f[n];
        assert_eq!(dg_next, df, "deg G_{}", n + 1);
        let prev = if n >= 2 { f[n - 2].0 } else { 1 };
        assert_eq!(df_next, (df + 1).max(prev), "deg F_{}", n + 1);
    }
}

#[test]
fn orbit_matches_symbolic_iterates() {
    let g = gamma();
    let x0 = vec![rat(2, 3), rat(-1, 2), rat(5, 7)];
    let orb = orbit(&g, &x0, 6, &Norm::Sup).unwrap();
    for n in 0..=6u32 {
        assert_eq!(iterate(&g, n).unwrap().apply(&x0).unwrap(), orb.points[n as usize], "n = {n}");
    }
}

#[test]
fn exact_coordinate_laws_along_orbit() {
    let x0 = vec![rat(1, 1); 3];
    let orb = orbit(&gamma(), &x0, 50, &Norm::Sup).unwrap();
    assert_eq!(orb.points.len(), 51);
    assert!(check_coordinate_laws(&lambdas(), &orb.points).is_empty());
}

#[test]
fn gamma_d_extra_coordinates_scale() {
    let g = make_gamma_d(&[rat(1, 3), rat(1, 4), rat(1, 5), rat(1, 7), rat(1, 11)], RangeCheck::Strict).unwrap();
    let g5 = iterate(&g, 5).unwrap();
    assert_eq!(g5.degree(), 6);
    assert_eq!(g5.component_degrees()[3..], [1, 1]);
    let x = vec![rat(1, 1); 5];
    let y = g5.apply(&x).unwrap();
    assert_eq!(y[3], rat(1, 7 * 7 * 7 * 7 * 7));
    assert_eq!(y[4], rat(1, 11 * 11 * 11 * 11 * 11));
}

#[test]
fn conjugation_preserves_degree_growth_class() {
    use polydyn_core::Polynomial;
    // F(x, y, z) = (x + y^2, y, z) with F^-1 = (x - y^2, y, z).
    let y2 = Polynomial::from_terms(3, [(vec![0, 2, 0], rat(1, 1))]);
    let x = Polynomial::var(3, 0);
    let big_f = PolyMap::new(vec![&x + &y2, Polynomial::var(3, 1), Polynomial::var(3, 2)]).unwrap();
    let big_f_inv = PolyMap::new(vec![&x - &y2, Polynomial::var(3, 1), Polynomial::var(3, 2)]).unwrap();
    let h = gamma().conjugate(&big_f, &big_f_inv).unwrap();
    let degs: Vec<u32> = (1..=8).map(|n| iterate(&h, n).unwrap().degree()).collect();
    // Conjugation by a fixed automorphism changes degrees by a bounded factor only.
    for (n, d) in degs.iter().enumerate() {
        let base = n as u32 + 2;
        assert!(*d >= base / 4 && *d <= 4 * base, "n = {}: {d}", n + 1);
    }
    assert!(degs.windows(2).all(|w| w[0] <= w[1]));
    assert!(degs[7] > degs[0]);
}
