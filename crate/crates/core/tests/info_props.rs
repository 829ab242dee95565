use proptest::prelude::*;
use zerone::info::{self, Dist, JointDist};

fn oracle_entropy(probs: &[f64]) -> f64 {
    probs.iter().filter(|&&p| p > 0.0).map(|&p| -p * p.log2()).sum()
}

fn oracle_mi(rows: &[Vec<f64>]) -> f64 {
    let px: Vec<f64> = rows.iter().map(|r| r.iter().sum()).collect();
    let py: Vec<f64> = (0..rows[0].len()).map(|j| rows.iter().map(|r| r[j]).sum()).collect();
    let mut mi = 0.0;
    for (i, r) in rows.iter().enumerate() {
        for (j, &p) in r.iter().enumerate() {
            if p > 0.0 {
                mi += p * (p / (px[i] * py[j])).log2();
            }
        }
    }
    mi
}

fn normalized(weights: Vec<f64>) -> Vec<f64> {
    let total: f64 = weights.iter().sum();
    weights.iter().map(|w| w / total).collect()
}

fn weights(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0f64..1.0, n).prop_filter("positive mass", |w| w.iter().sum::<f64>() > 1e-3)
}

fn joint(max_arity: usize, max_size: usize) -> impl Strategy<Value = JointDist> {
    prop::collection::vec(1..=max_size, 2..=max_arity).prop_flat_map(|sizes| {
        let cells: usize = sizes.iter().product();
        weights(cells).prop_map(move |w| JointDist::from_fn(&sizes, {
            let p = normalized(w.clone());
            let sizes = sizes.clone();
            move |k| p[k.iter().zip(&sizes).fold(0, |acc, (&x, &s)| acc * s + x)]
        })
        .unwrap())
    })
}

fn matrix(max: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    (1..=max, 1..=max).prop_flat_map(|(r, c)| {
        weights(r * c).prop_map(move |w| normalized(w).chunks(c).map(<[f64]>::to_vec).collect())
    })
}

proptest! {
    #[test]
    fn entropy_matches_oracle_and_bounds(w in weights(6)) {
        let d = Dist::from_probs(normalized(w)).unwrap();
        let h = info::entropy(&d, 2.0).unwrap();
        prop_assert!((h - oracle_entropy(d.probs())).abs() < 1e-12);
        prop_assert!(h >= 0.0 && h <= (d.len() as f64).log2() + 1e-12);
    }

    #[test]
    fn mi_matches_oracle(m in matrix(4)) {
        let j = JointDist::from_matrix(&m).unwrap();
        let mi = info::mutual_information(&j, 2.0).unwrap();
        prop_assert!(mi >= 0.0);
        prop_assert!((mi - oracle_mi(&m).max(0.0)).abs() < 1e-9);
        let hx = j.entropy_of(&[0], 2.0).unwrap();
        let hy = j.entropy_of(&[1], 2.0).unwrap();
        prop_assert!(mi <= hx.min(hy) + 1e-9);
    }

    #[test]
    fn chain_rule(j in joint(4, 3)) {
        let n = j.arity() - 1;
        let ws: Vec<usize> = (1..=n).collect();
        let lhs = j.mutual_information_between(&[0], &ws, 2.0).unwrap();
        let mut rhs = j.mutual_information_between(&[0], &[1], 2.0).unwrap();
        for i in 2..=n {
            let mut with_v = vec![0];
            with_v.extend(1..i);
            let prev: Vec<usize> = (1..i).collect();
            rhs += j.mutual_information_between(&[i], &with_v, 2.0).unwrap()
                - j.mutual_information_between(&[i], &prev, 2.0).unwrap();
        }
        prop_assert!((lhs - rhs).abs() < 1e-9, "lhs {} rhs {}", lhs, rhs);
    }

    #[test]
    fn pinsker(m in matrix(4)) {
        let j = JointDist::from_matrix(&m).unwrap();
        let nats = info::mutual_information(&j, std::f64::consts::E).unwrap();
        prop_assert!(info::sup_dependence(&j).unwrap() <= (nats / 2.0).sqrt() + 1e-12);
    }

    #[test]
    fn data_processing(m in matrix(4), f in prop::collection::vec(0usize..2, 4)) {
        // Merge rows of X through f into a binary variable.
        let mut merged = vec![vec![0.0; m[0].len()]; 2];
        for (i, row) in m.iter().enumerate() {
            for (c, &p) in row.iter().enumerate() {
                merged[f[i]][c] += p;
            }
        }
        let before = info::mutual_information(&JointDist::from_matrix(&m).unwrap(), 2.0).unwrap();
        let after = info::mutual_information(&JointDist::from_matrix(&merged).unwrap(), 2.0).unwrap();
        prop_assert!(after <= before + 1e-9);
    }

    #[test]
    fn group_preserves_probabilities(j in joint(3, 3)) {
        let all: Vec<usize> = (0..j.arity()).collect();
        let g = info::group(&j, &[all]).unwrap();
        prop_assert_eq!(g.arity(), 1);
        let s: f64 = g.probs().iter().sum();
        prop_assert!((s - 1.0).abs() < 1e-12);
        prop_assert_eq!(g.probs(), j.probs());
    }

    #[test]
    fn marginals_stay_on_simplex(j in joint(4, 3)) {
        for c in 0..j.arity() {
            let m = j.marginal(c).unwrap();
            prop_assert!(m.probs().iter().all(|&p| p >= 0.0));
            prop_assert!((m.probs().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn tv_is_a_metric(a in weights(4), b in weights(4), c in weights(4)) {
        let (p, q, r) = (
            Dist::from_probs(normalized(a)).unwrap(),
            Dist::from_probs(normalized(b)).unwrap(),
            Dist::from_probs(normalized(c)).unwrap(),
        );
        let pq = info::tv_distance(&p, &q).unwrap();
        prop_assert!((0.0..=1.0 + 1e-12).contains(&pq));
        prop_assert!((pq - info::tv_distance(&q, &p).unwrap()).abs() < 1e-15);
        prop_assert!(pq <= info::tv_distance(&p, &r).unwrap() + info::tv_distance(&r, &q).unwrap() + 1e-12);
        prop_assert_eq!(info::tv_distance(&p, &p).unwrap(), 0.0);
    }

    #[test]
    fn oconnell_independent(ws in prop::collection::vec(weights(3), 1..=3), k in weights(27 * 3)) {
        // W's independent; V = a noisy function of (W_1, ..., W_n) through kernel k.
        let margs: Vec<Vec<f64>> = ws.into_iter().map(normalized).collect();
        let mut sizes = vec![3];
        sizes.extend(margs.iter().map(Vec::len));
        let j = JointDist::from_fn(&sizes, |key| {
            let idx = key[1..].iter().fold(0, |acc, &x| acc * 3 + x);
            let kern = &k[idx * 3..idx * 3 + 3];
            let pw: f64 = key[1..].iter().zip(&margs).map(|(&x, m)| m[x]).product();
            pw * kern[key[0]] / kern.iter().sum::<f64>().max(1e-12)
        });
        if let Ok(j) = j {
            let r = info::oconnell_report(&j, 0).unwrap();
            prop_assert!(r.gap >= -1e-9, "gap {}", r.gap);
            prop_assert!(r.gamma_star < 1e-9);
        }
    }
}
