//! Property tests for the data layer and tree accounting.

use proptest::prelude::*;

use vg_core::data::{
    apply_signature, load_csv_reader, stack_counterfactual, ConditionOp, CovariateKind, Dataset,
    ResponseKind, Signature, SplitCondition,
};
use vg_core::tree::{grow_tree, SplitPolicy, SplitPolicyKind, StopRule};

fn finite_f64() -> impl Strategy<Value = f64> {
    prop_oneof![
        -1e6f64..1e6f64,
        Just(0.0),
        Just(1.0),
        Just(-3.5),
        Just(f64::MIN_POSITIVE),
    ]
}

fn covariate_column(n: usize) -> impl Strategy<Value = (Vec<f64>, CovariateKind)> {
    let continuous = proptest::collection::vec(
        prop_oneof![4 => finite_f64(), 1 => Just(f64::NAN)],
        n,
    )
    .prop_map(|col| (col, CovariateKind::Continuous));
    let binary = proptest::collection::vec(
        prop_oneof![3 => Just(0.0), 3 => Just(1.0), 1 => Just(f64::NAN)],
        n,
    )
    .prop_map(|col| (col, CovariateKind::Binary));
    prop_oneof![continuous, binary]
}

fn dataset() -> impl Strategy<Value = Dataset> {
    (4usize..24, 1usize..4).prop_flat_map(|(n, p)| {
        (
            proptest::collection::vec(finite_f64(), n),
            proptest::collection::vec(any::<bool>(), n),
            proptest::collection::vec(covariate_column(n), p),
        )
            .prop_map(move |(response, arms, cols)| {
                let mut treatment: Vec<u8> = arms.iter().map(|&b| u8::from(b)).collect();
                treatment[0] = 0;
                treatment[1] = 1;
                let (columns, kinds): (Vec<_>, Vec<_>) = cols.into_iter().unzip();
                let names = (1..=p).map(|j| format!("X{j}")).collect();
                Dataset::new(
                    response,
                    ResponseKind::Continuous,
                    treatment,
                    columns,
                    kinds,
                    names,
                )
                .unwrap()
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn stacked_design_invariants(d in dataset()) {
        let s = stack_counterfactual(&d);
        let n = d.n();
        prop_assert_eq!(s.rows(), 2 * n);
        prop_assert_eq!(s.feature_count(), 3 * d.p() + 1);
        for i in 0..n {
            prop_assert_eq!(s.t_star[i + n], 1.0 - s.t_star[i]);
            prop_assert_eq!(s.fit_weight[i], 1.0);
            prop_assert_eq!(s.fit_weight[i + n], 0.0);
        }
        for j in 0..d.p() {
            for i in 0..n {
                // duplicated covariates and rowwise interaction identities
                let same = s.x_star[j][i].to_bits() == s.x_star[j][i + n].to_bits();
                prop_assert!(same);
                for r in [i, i + n] {
                    let xt = s.t_star[r] * s.x_star[j][r];
                    let x1mt = (1.0 - s.t_star[r]) * s.x_star[j][r];
                    prop_assert!(s.xt[j][r].to_bits() == xt.to_bits());
                    prop_assert!(s.x_one_minus_t[j][r].to_bits() == x1mt.to_bits());
                }
            }
        }
    }

    #[test]
    fn signature_membership_permutes_with_rows(d in dataset(), threshold in -10.0f64..10.0) {
        let s = Signature::new(vec![SplitCondition {
            variable: "X1".into(),
            op: ConditionOp::Le { threshold },
        }]).unwrap();
        let (members, rest) = apply_signature(&d, &s).unwrap();
        prop_assert_eq!(members.len() + rest.len(), d.n());

        // reverse the rows; membership indices must map through the reversal
        let n = d.n();
        let rev: Vec<usize> = (0..n).rev().collect();
        let d_rev = {
            let response: Vec<f64> = rev.iter().map(|&i| d.response()[i]).collect();
            let treatment: Vec<u8> = rev.iter().map(|&i| d.treatment()[i]).collect();
            let columns: Vec<Vec<f64>> = (0..d.p())
                .map(|j| rev.iter().map(|&i| d.value(i, j)).collect())
                .collect();
            Dataset::new(
                response,
                d.response_kind(),
                treatment,
                columns,
                d.kinds().to_vec(),
                d.names().to_vec(),
            ).unwrap()
        };
        let (members_rev, _) = apply_signature(&d_rev, &s).unwrap();
        let mut mapped: Vec<usize> = members_rev.iter().map(|&i| n - 1 - i).collect();
        mapped.sort_unstable();
        prop_assert_eq!(mapped, members);
    }

    #[test]
    fn csv_round_trip_is_bitwise(d in dataset()) {
        let mut buf = Vec::new();
        d.write_csv(&mut buf).unwrap();
        let back = load_csv_reader(buf.as_slice(), &d.schema()).unwrap();
        prop_assert_eq!(back.n(), d.n());
        for i in 0..d.n() {
            prop_assert!(back.response()[i].to_bits() == d.response()[i].to_bits());
            prop_assert_eq!(back.treatment()[i], d.treatment()[i]);
            for j in 0..d.p() {
                let (a, b) = (d.value(i, j), back.value(i, j));
                prop_assert!(a.to_bits() == b.to_bits() || (a.is_nan() && b.is_nan()));
            }
        }
    }

    #[test]
    fn tree_leaves_partition_and_aggregate(d in dataset(), shift in -2.0f64..2.0) {
        let target: Vec<f64> = (0..d.n())
            .map(|i| {
                let x = d.value(i, 0);
                if x.is_nan() { shift } else { shift + f64::from(x > 0.0) }
            })
            .collect();
        let policy = SplitPolicy {
            kind: SplitPolicyKind::GuideUnbiased,
            stop: StopRule { min_node: 2, max_depth: 3, theta: 1.0 },
            selection: Default::default(),
        };
        let tree = grow_tree(&d, &target, &policy);
        let mut seen: Vec<usize> = tree
            .leaves()
            .iter()
            .flat_map(|l| l.rows.iter().copied())
            .collect();
        seen.sort_unstable();
        prop_assert_eq!(seen, (0..d.n()).collect::<Vec<_>>());
        let overall = target.iter().sum::<f64>() / target.len() as f64;
        let weighted: f64 = tree
            .leaves()
            .iter()
            .map(|l| l.value * l.n() as f64)
            .sum::<f64>() / d.n() as f64;
        prop_assert!((weighted - overall).abs() < 1e-10);
    }
}
