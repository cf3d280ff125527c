use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use proptest::sample::subsequence;

use toric_mirror::divisor::{
    class_group, class_in, divisor_class, restrict_to_hypersurface, roots, sections, ToricDivisor,
};
use toric_mirror::fan::{cpl_cone, normal_fan, subdivide, support_function};
use toric_mirror::linalg::{
    cokernel, lp_feasible_strict, smith_normal_form, solve, IntMatrix, LinearConstraint, Rat,
    Relation,
};
use toric_mirror::mirror::{h11_toric, hd11_poly, make_pair};
use toric_mirror::polytope::{LatticePolytope, LatticeTag};
use toric_mirror::secondary::{chamber_of, enumerate_chambers, lift};

fn int(v: i64) -> BigInt {
    BigInt::from(v)
}

fn rat(v: i64) -> Rat {
    Rat::from_integer(int(v))
}

/// Fraction-free elimination over i128: rank and, for square input, the
/// determinant.
fn bareiss(mut m: Vec<Vec<i128>>) -> (usize, i128) {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let (mut r, mut prev, mut sign) = (0, 1i128, 1i128);
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| m[i][c] != 0) else {
            continue;
        };
        if p != r {
            m.swap(p, r);
            sign = -sign;
        }
        for i in r + 1..rows {
            for j in c + 1..cols {
                m[i][j] = (m[r][c] * m[i][j] - m[i][c] * m[r][j]) / prev;
            }
            m[i][c] = 0;
        }
        prev = m[r][c];
        r += 1;
    }
    let det = if r == rows && rows == cols {
        sign * prev
    } else {
        0
    };
    (r, det)
}

fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..5, 1usize..5)
        .prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-6i64..=6, c), r))
}

fn to_matrix(rows: &[Vec<i64>]) -> IntMatrix {
    IntMatrix::from_i64_rows(rows, rows[0].len())
}

fn to_i128(rows: &[Vec<i64>]) -> Vec<Vec<i128>> {
    rows.iter()
        .map(|r| r.iter().map(|&v| v as i128).collect())
        .collect()
}

/// Boundary points of the three maximal reflexive polygons; any subset
/// whose hull has the origin in its interior is again reflexive.
const RINGS: [&[[i64; 2]]; 3] = [
    &[
        [-1, -1],
        [0, -1],
        [1, -1],
        [2, -1],
        [1, 0],
        [0, 1],
        [-1, 2],
        [-1, 1],
        [-1, 0],
    ],
    &[
        [-1, -1],
        [0, -1],
        [1, -1],
        [1, 0],
        [1, 1],
        [0, 1],
        [-1, 1],
        [-1, 0],
    ],
    &[
        [-1, -1],
        [0, -1],
        [1, -1],
        [2, -1],
        [3, -1],
        [1, 0],
        [-1, 1],
        [-1, 0],
    ],
];

fn unimodular() -> impl Strategy<Value = [[i64; 2]; 2]> {
    prop::collection::vec((0u8..4, -2i64..=2), 0..4).prop_map(|ops| {
        let mut g = [[1, 0], [0, 1]];
        for (op, k) in ops {
            g = match op {
                0 => [[g[0][0] + k * g[1][0], g[0][1] + k * g[1][1]], g[1]],
                1 => [g[0], [g[1][0] + k * g[0][0], g[1][1] + k * g[0][1]]],
                2 => [g[1], g[0]],
                _ => [[-g[0][0], -g[0][1]], g[1]],
            };
        }
        g
    })
}

fn reflexive_polygon() -> impl Strategy<Value = LatticePolytope> {
    (0usize..3)
        .prop_flat_map(|i| {
            (
                subsequence(RINGS[i].to_vec(), 3..=RINGS[i].len()),
                unimodular(),
            )
        })
        .prop_filter_map("origin must be interior", |(pts, g)| {
            let moved: Vec<Vec<i64>> = pts
                .iter()
                .map(|p| {
                    vec![
                        g[0][0] * p[0] + g[0][1] * p[1],
                        g[1][0] * p[0] + g[1][1] * p[1],
                    ]
                })
                .collect();
            let p = LatticePolytope::hull(&moved, LatticeTag::m(2)).ok()?;
            p.origin_interior().then_some(p)
        })
}

fn random_polytope(dim: usize) -> impl Strategy<Value = LatticePolytope> {
    prop::collection::vec(prop::collection::vec(-3i64..=3, dim), dim + 1..dim + 6)
        .prop_filter_map("full-dimensional", move |pts| {
            LatticePolytope::hull(&pts, LatticeTag::m(dim)).ok()
        })
}

fn box_scan(p: &LatticePolytope, bound: i64) -> BTreeSet<Vec<i64>> {
    let d = p.dim();
    let mut out = BTreeSet::new();
    let mut cur = vec![-bound; d];
    loop {
        if p.facets().iter().all(|f| f.slack(&cur) >= 0) {
            out.insert(cur.clone());
        }
        let mut k = 0;
        while k < d && cur[k] == bound {
            cur[k] = -bound;
            k += 1;
        }
        if k == d {
            return out;
        }
        cur[k] += 1;
    }
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn smith_decomposition_is_exact(rows in small_matrix()) {
        let a = to_matrix(&rows);
        let snf = smith_normal_form(&a);
        prop_assert_eq!(snf.u.mul(&a).mul(&snf.v), snf.s.clone());
        prop_assert!(snf.s.is_diagonal());
        let d = snf.invariant_factors();
        prop_assert_eq!(d.len(), snf.rank);
        prop_assert!(d.iter().all(|x| x.is_positive()));
        prop_assert!(d.windows(2).all(|w| (&w[1] % &w[0]).is_zero()));
        prop_assert_eq!(snf.rank, bareiss(to_i128(&rows)).0);
        let det_u = bareiss(snf.u.to_rows().iter().map(|r| r.iter().map(|v| i128::try_from(v).unwrap()).collect()).collect()).1;
        let det_v = bareiss(snf.v.to_rows().iter().map(|r| r.iter().map(|v| i128::try_from(v).unwrap()).collect()).collect()).1;
        prop_assert_eq!(det_u.abs(), 1);
        prop_assert_eq!(det_v.abs(), 1);
    }

    #[test]
    fn cokernel_kills_the_image(rows in small_matrix()) {
        let a = to_matrix(&rows);
        let pres = cokernel(&a);
        let rank = bareiss(to_i128(&rows)).0;
        prop_assert_eq!(pres.free_rank + rank, rows.len());
        for j in 0..a.cols() {
            let (free, tors) = pres.apply(&a.column(j));
            prop_assert!(free.iter().all(Zero::is_zero));
            prop_assert!(tors.iter().zip(&pres.torsion).all(|(t, m)| t.mod_floor(m).is_zero()));
        }
        prop_assert!(pres.torsion.iter().all(|t| t > &BigInt::one()));
        if rank == a.cols() {
            // product of torsion = gcd of maximal minors
            let c = a.cols();
            let mut g = 0i128;
            let subsets = (0u32..1 << rows.len()).filter(|m| m.count_ones() as usize == c);
            for mask in subsets {
                let sub: Vec<Vec<i64>> = (0..rows.len()).filter(|i| mask >> i & 1 == 1).map(|i| rows[i].clone()).collect();
                g = g.gcd(&bareiss(to_i128(&sub)).1);
            }
            let prod = pres.torsion.iter().fold(BigInt::one(), |acc, t| acc * t);
            prop_assert_eq!(prod, BigInt::from(g));
        }
    }

    #[test]
    fn lp_witness_satisfies_every_constraint(
        vars in 1usize..4,
        raw in prop::collection::vec((prop::collection::vec(-4i64..=4, 3), -4i64..=4, any::<bool>()), 1..7),
    ) {
        let cons: Vec<LinearConstraint> = raw
            .iter()
            .map(|(c, k, strict)| LinearConstraint::new(
                c[..vars].iter().map(|&v| rat(v)).collect(),
                rat(*k),
                if *strict { Relation::Gt } else { Relation::Geq },
            ))
            .collect();
        if let Ok(x) = lp_feasible_strict(vars, &cons) {
            prop_assert!(cons.iter().all(|c| c.is_satisfied(&x)));
        }
    }

    #[test]
    fn lp_finds_planted_strict_points(
        x0 in prop::collection::vec(-3i64..=3, 3),
        normals in prop::collection::vec(prop::collection::vec(-4i64..=4, 3), 1..7),
        slack in prop::collection::vec(1i64..4, 7),
    ) {
        // every constraint holds strictly at x0
        let cons: Vec<LinearConstraint> = normals
            .iter()
            .zip(&slack)
            .map(|(n, s)| LinearConstraint::new(n.iter().map(|&v| rat(v)).collect(), rat(s - dot(n, &x0)), Relation::Gt))
            .collect();
        let x = lp_feasible_strict(3, &cons).expect("planted point makes the system feasible");
        prop_assert!(cons.iter().all(|c| c.is_satisfied(&x)));
    }

    #[test]
    fn lattice_points_match_box_scan(p in prop_oneof![random_polytope(2), random_polytope(3)]) {
        let listed = p.lattice_points();
        let set: BTreeSet<Vec<i64>> = listed.iter().cloned().collect();
        prop_assert_eq!(set.len(), listed.len());
        prop_assert!(listed.windows(2).all(|w| w[0] < w[1]));
        prop_assert_eq!(set, box_scan(&p, 3));
    }

    #[test]
    fn reflexive_iff_polar_integral(p in prop_oneof![random_polytope(2), random_polytope(3)]) {
        if p.origin_interior() {
            prop_assert_eq!(p.is_reflexive(), p.polar().is_ok());
        } else {
            prop_assert!(!p.is_reflexive());
        }
    }

    #[test]
    fn normal_fan_covers_every_direction(p in prop_oneof![random_polytope(2), random_polytope(3)], seed in any::<u64>()) {
        let fan = normal_fan(&p).unwrap();
        prop_assert!(fan.is_complete());
        let d = p.dim();
        let x: Vec<i64> = (0..d).map(|i| ((seed >> (8 * i)) % 11) as i64 - 5).collect();
        if x.iter().any(|&v| v != 0) {
            prop_assert!(!fan.containing_cones(&x).unwrap().is_empty());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn polar_is_an_involution_with_unit_pairing(p in reflexive_polygon()) {
        prop_assert!(p.is_reflexive());
        let q = p.polar().unwrap();
        prop_assert!(q.is_reflexive());
        prop_assert_eq!(q.polar().unwrap(), p.clone());
        let normals: BTreeSet<Vec<i64>> = p.facets().iter().map(|f| f.normal.clone()).collect();
        let vertices: BTreeSet<Vec<i64>> = q.vertices().iter().cloned().collect();
        prop_assert_eq!(normals, vertices);
        for f in p.facets() {
            prop_assert!(p.vertices().iter().all(|v| dot(v, &f.normal) >= -1));
            prop_assert!(p.vertices().iter().filter(|v| dot(v, &f.normal) == -1).count() >= 2);
        }
        let fan_rays: BTreeSet<Vec<i64>> = normal_fan(&p).unwrap().rays().iter().cloned().collect();
        prop_assert_eq!(fan_rays, q.vertices().iter().cloned().collect::<BTreeSet<_>>());
    }

    #[test]
    fn classification_partitions_points(p in reflexive_polygon()) {
        let c = p.classify_points().unwrap();
        prop_assert_eq!(c.total(), p.lattice_points().len());
        prop_assert_eq!(c.interior_points.clone(), vec![vec![0, 0]]);
        let mut all: Vec<Vec<i64>> = c.vertices.iter().chain(&c.interior_points).chain(&c.facet_interior_points)
            .chain(&c.boundary_nonfacet_points).cloned().collect();
        all.sort();
        prop_assert_eq!(all, p.lattice_points());
    }

    #[test]
    fn support_function_reproduces_ray_values(p in reflexive_polygon(), d in prop::collection::vec(-3i64..=3, 9), m in prop::collection::vec(-3i64..=3, 2)) {
        let fan = normal_fan(&p).unwrap();
        let k = fan.rays().len();
        let sf = support_function(&fan, &d[..k]).unwrap();
        for (a, r) in fan.rays().iter().enumerate() {
            prop_assert_eq!(sf.evaluate(r).unwrap(), rat(-d[a]));
        }
        // adding a principal divisor shifts every u_σ by the same functional
        let shifted: Vec<i64> = (0..k).map(|a| d[a] + dot(&fan.rays()[a], &m)).collect();
        let sf2 = support_function(&fan, &shifted).unwrap();
        for (u, v) in sf.functionals().iter().zip(sf2.functionals()) {
            let diff: Vec<Rat> = u.iter().zip(v).map(|(x, y)| y - x).collect();
            prop_assert_eq!(diff, vec![rat(-m[0]), rat(-m[1])]);
        }
        prop_assert_eq!(sf.convexity(true), sf2.convexity(true));
        prop_assert_eq!(sf.convexity(false), sf2.convexity(false));
    }

    #[test]
    fn class_zero_iff_principal(p in reflexive_polygon(), d in prop::collection::vec(-2i64..=2, 9), m in prop::collection::vec(-5i64..=5, 2)) {
        let fan = normal_fan(&p).unwrap();
        let k = fan.rays().len();
        let principal = ToricDivisor::principal(&fan, &m).unwrap();
        prop_assert!(divisor_class(&principal).unwrap().is_zero());
        let div = ToricDivisor::new(&fan, d[..k].to_vec()).unwrap();
        let zero = divisor_class(&div).unwrap().is_zero();
        let rows: Vec<Vec<Rat>> = fan.rays().iter().map(|r| r.iter().map(|&v| rat(v)).collect()).collect();
        let rhs: Vec<Rat> = d[..k].iter().map(|&v| rat(v)).collect();
        let integral = solve(&rows, 2, &rhs).map(|x| x.iter().all(Rat::is_integer)).unwrap_or(false);
        prop_assert_eq!(zero, integral);
    }

    #[test]
    fn sections_have_constant_cox_degree(p in reflexive_polygon(), d in prop::collection::vec(0i64..=2, 9)) {
        let fan = normal_fan(&p).unwrap();
        let k = fan.rays().len();
        let div = ToricDivisor::new(&fan, d[..k].to_vec()).unwrap();
        let s = sections(&div).unwrap();
        let g = class_group(&fan).unwrap();
        let target = divisor_class(&div).unwrap();
        prop_assert_eq!(s.points.len(), s.monomials.len());
        prop_assert!(s.points.contains(&vec![0, 0]));
        for (m, e) in s.points.iter().zip(&s.monomials) {
            prop_assert!(e.iter().all(|&x| x >= 0));
            let expect: Vec<i64> = fan.rays().iter().zip(&d).map(|(r, di)| dot(r, m) + di).collect();
            prop_assert_eq!(e, &expect);
            prop_assert_eq!(class_in(&g, e), target.clone());
        }
    }

    #[test]
    fn roots_are_negated_facet_interior_points(p in reflexive_polygon()) {
        let fan = normal_fan(&p).unwrap();
        let neg: BTreeSet<Vec<i64>> = roots(&fan).unwrap().iter().map(|r| r.iter().map(|v| -v).collect()).collect();
        let fi: BTreeSet<Vec<i64>> = p.classify_points().unwrap().facet_interior_points.into_iter().collect();
        prop_assert_eq!(neg, fi);
    }

    #[test]
    fn mirror_ranks_are_dual(p in reflexive_polygon(), seed in 0u64..4) {
        let pair = make_pair(&p, None, None, seed).unwrap();
        let swapped = pair.swapped(seed).unwrap();
        prop_assert_eq!(h11_toric(&pair).unwrap(), hd11_poly(&swapped).unwrap());
        prop_assert_eq!(hd11_poly(&pair).unwrap(), h11_toric(&swapped).unwrap());
        // point count minus roots of the normal fan gives the polynomial rank
        let n_roots = roots(&normal_fan(&p).unwrap()).unwrap().len();
        prop_assert_eq!(p.lattice_points().len() - 1 - 2 - n_roots, hd11_poly(&pair).unwrap());
        let (xi0, pres) = restrict_to_hypersurface(&pair.fan_x, &pair.polar).unwrap();
        prop_assert_eq!(pres.free_rank, xi0.len() - 2);
    }

    #[test]
    fn subdivision_refines_and_is_regular(p in reflexive_polygon(), extra in prop::collection::vec(any::<bool>(), 9), seed in 0u64..8) {
        let polar = p.polar().unwrap();
        let base = normal_fan(&p).unwrap();
        let required = polar.classify_points().unwrap().reduced_nonzero_points();
        let optional = polar.classify_points().unwrap().facet_interior_points;
        let mut rays = required;
        rays.extend(optional.into_iter().zip(&extra).filter(|(_, &e)| e).map(|(r, _)| r));
        for r in base.rays() {
            if !rays.contains(r) {
                rays.push(r.clone());
            }
        }
        let fan = subdivide(&base, &rays, None, seed).unwrap();
        prop_assert_eq!(fan.rays().iter().cloned().collect::<BTreeSet<_>>(), rays.iter().cloned().collect::<BTreeSet<_>>());
        prop_assert!(fan.is_complete() && fan.is_pure_simplicial());
        for cone in fan.max_cones() {
            let mut common: Option<BTreeSet<usize>> = None;
            for &r in cone {
                let here: BTreeSet<usize> = base.containing_cones(&fan.rays()[r]).unwrap().into_iter().collect();
                common = Some(match common { None => here, Some(c) => c.intersection(&here).copied().collect() });
            }
            prop_assert!(!common.unwrap().is_empty(), "cone {:?} not inside one input cone", cone);
        }
        prop_assert!(cpl_cone(&fan).unwrap().full_dimensional);
    }
}

fn configuration() -> impl Strategy<Value = Vec<Vec<i64>>> {
    let grid: Vec<Vec<i64>> = (-1..=1)
        .flat_map(|x| (-1..=1).map(move |y| vec![x, y]))
        .collect();
    subsequence(grid, 3..=6)
}

fn twice_area(a: &[i64], b: &[i64], c: &[i64]) -> i64 {
    (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn chambers_cover_generic_heights(pts in configuration(), hs in prop::collection::vec(prop::collection::vec(-1000i64..1000, 6), 4)) {
        let Ok(config) = lift(&pts, false) else { return Ok(()); };
        let chambers = enumerate_chambers(&config).unwrap();
        let gale_rank = pts.len() - 3;
        for c in &chambers {
            prop_assert!(c.cone.full_dimensional);
            prop_assert_eq!(c.cone.dim(), gale_rank);
            prop_assert!(c.triangulation.cells.iter().all(|cell| twice_area(&pts[cell[0]], &pts[cell[1]], &pts[cell[2]]) != 0));
        }
        // areas of cells add up to the same total in every triangulation
        let areas: BTreeSet<i64> = chambers
            .iter()
            .map(|c| c.triangulation.cells.iter().map(|cell| twice_area(&pts[cell[0]], &pts[cell[1]], &pts[cell[2]]).abs()).sum())
            .collect();
        prop_assert_eq!(areas.len(), 1);
        for h in hs {
            let heights: Vec<Rat> = h[..pts.len()].iter().map(|&v| rat(v)).collect();
            let Ok(ch) = chamber_of(&config, &heights) else { continue };
            let hits = chambers.iter().filter(|c| c.contains_heights(&heights)).count();
            prop_assert_eq!(hits, 1);
            prop_assert!(chambers.iter().any(|c| c.triangulation == ch.triangulation));
        }
    }
}
