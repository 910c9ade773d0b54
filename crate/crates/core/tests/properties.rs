use proptest::prelude::*;

use ftrl_core::cli::{run_experiment, write_run_csv, Config};
use ftrl_core::learners::Learner;
use ftrl_core::mirror::{md_as_ftrl_step, mirror_descent_step, MdFtrlState, MirrorState};
use ftrl_core::primitives::{
    bregman_divergence, project_l2_ball, schedule_sigma, softmax_simplex, Centering, CompositePenalty,
    FeasibleSet, LearningRateSchedule, Point, RegularizerSpec,
};
use ftrl_core::streams::{l1_adversary_next, parse_svmlight, Example};
use ftrl_core::OnlineLearner;

fn point(n: usize, range: f64) -> impl Strategy<Value = Point> {
    prop::collection::vec(-range..range, n).prop_map(|v| Point::new(v).unwrap())
}

fn stream(n: usize, len: usize) -> impl Strategy<Value = Vec<Point>> {
    prop::collection::vec(point(n, 3.0), 1..len)
}

proptest! {
    #[test]
    fn softmax_is_a_shift_invariant_distribution(z in prop::collection::vec(-30.0..30.0f64, 1..8), c in -50.0..50.0f64) {
        let p = softmax_simplex(&Point::new(z.clone()).unwrap());
        prop_assert!(p.iter().all(|v| *v > 0.0));
        prop_assert!((p.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
        let shifted = softmax_simplex(&Point::new(z.iter().map(|v| v + c).collect()).unwrap());
        for (a, b) in p.iter().zip(shifted.iter()) {
            prop_assert!((a - b).abs() <= 1e-12);
        }
    }

    #[test]
    fn quadratic_bregman_is_nonnegative(
        (u, v, w) in (1usize..6).prop_flat_map(|n| (point(n, 5.0), point(n, 5.0), prop::collection::vec(0.0..4.0f64, n)))
    ) {
        let spec = RegularizerSpec::quadratic(w, Centering::Centered).unwrap();
        prop_assert!(bregman_divergence(&spec, &u, &v).unwrap() >= -1e-12);
        prop_assert!(bregman_divergence(&spec, &u, &u).unwrap().abs() <= 1e-12);
    }

    #[test]
    fn sigmas_telescope_to_inverse_rate(scale in 0.01..10.0f64, shift in 0u32..3, rounds in 1usize..200) {
        let sched = LearningRateSchedule::InverseSqrtT { scale, shift };
        let mut total = 0.0;
        for t in 0..=rounds {
            let s = schedule_sigma(&sched, t, 0.0, 0.0).unwrap();
            prop_assert!(s >= 0.0);
            total += s;
        }
        let target = sched.inverse_rate(rounds, 0.0);
        prop_assert!((total - target).abs() <= 1e-9 * target.max(1.0));
    }

    #[test]
    fn ball_projection_is_idempotent(v in point(4, 20.0), r in 0.01..10.0f64) {
        let p = project_l2_ball(&v, r).unwrap();
        prop_assert!(p.norm2() <= r * (1.0 + 1e-12));
        prop_assert_eq!(project_l2_ball(&p, r).unwrap(), p);
    }

    #[test]
    fn constant_rate_learners_agree(gs in stream(3, 40), eta in 0.05..2.0f64) {
        let sched = LearningRateSchedule::Constant { eta };
        let set = FeasibleSet::Unconstrained;
        let mut da = Learner::dual_averaging(3, set, sched.clone()).unwrap();
        let mut prox = Learner::ftrl_proximal(3, set, sched.clone()).unwrap();
        let mut comp = Learner::composite_l1(3, set, sched, Centering::Proximal, CompositePenalty::l1(0.0).unwrap()).unwrap();
        let mut sum = [0.0; 3];
        for g in &gs {
            sum.iter_mut().zip(g.iter()).for_each(|(s, v)| *s += v);
            for x in [da.observe(g).unwrap(), prox.observe(g).unwrap(), comp.observe(g).unwrap()] {
                for (xi, si) in x.iter().zip(sum) {
                    prop_assert!((xi + eta * si).abs() <= 1e-12 * (1.0 + (eta * si).abs()));
                }
            }
        }
    }

    #[test]
    fn iterates_stay_feasible(gs in stream(4, 60), r in 0.1..5.0f64) {
        let ball = FeasibleSet::l2_ball(r).unwrap();
        let boxed = FeasibleSet::boxed(r).unwrap();
        let mut learners: Vec<Box<dyn OnlineLearner>> = vec![
            Box::new(Learner::dual_averaging(4, ball, LearningRateSchedule::InverseSqrtT { scale: 1.0, shift: 1 }).unwrap()),
            Box::new(Learner::ftrl_proximal(4, boxed, LearningRateSchedule::AdaGradDiagonal { scale: r, offset: 0.0 }).unwrap()),
            Box::new(Learner::entropic(4, 3.0).unwrap()),
        ];
        for g in &gs {
            for l in learners.iter_mut() {
                let x = l.observe(g).unwrap();
                match l.set() {
                    FeasibleSet::L2Ball { radius } => prop_assert!(x.norm2() <= radius * (1.0 + 1e-12)),
                    FeasibleSet::Box { half_width } => prop_assert!(x.norm_inf() <= *half_width),
                    FeasibleSet::Simplex => {
                        prop_assert!(x.iter().all(|v| *v >= 0.0));
                        prop_assert!((x.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
                    }
                    FeasibleSet::Unconstrained => {}
                }
            }
        }
    }

    #[test]
    fn plain_mirror_descent_is_gradient_descent(gs in stream(2, 40), eta in 0.05..2.0f64) {
        let sched = LearningRateSchedule::Constant { eta };
        let mut md = MirrorState::new(2, FeasibleSet::Unconstrained, sched, CompositePenalty::none()).unwrap();
        let mut x = Point::zeros(2);
        for g in &gs {
            let next = mirror_descent_step(&mut md, g).unwrap();
            x = Point::new(x.iter().zip(g.iter()).map(|(a, b)| a - eta * b).collect()).unwrap();
            for (a, b) in next.iter().zip(x.iter()) {
                prop_assert!((a - b).abs() <= 1e-12 * (1.0 + b.abs()));
            }
        }
    }

    #[test]
    fn mirror_descent_matches_ftrl_form(gs in stream(3, 50), lambda in 0.0..1.0f64, eta in 0.1..2.0f64, boxed in any::<bool>()) {
        let sched = LearningRateSchedule::InverseSqrtT { scale: eta, shift: 1 };
        let set = if boxed { FeasibleSet::boxed(1.5).unwrap() } else { FeasibleSet::Unconstrained };
        let penalty = CompositePenalty::l1(lambda).unwrap();
        let mut md = MirrorState::new(3, set, sched.clone(), penalty).unwrap();
        let mut ff = MdFtrlState::new(3, set, sched, penalty).unwrap();
        for g in &gs {
            let a = mirror_descent_step(&mut md, g).unwrap();
            let b = md_as_ftrl_step(&mut ff, g).unwrap();
            for (x, y) in a.iter().zip(b.iter()) {
                prop_assert!((x - y).abs() <= 1e-8);
            }
        }
    }

    #[test]
    fn adversary_respects_gradient_bound(x in -10.0..10.0f64, t in 1usize..100, g in 0.1..20.0f64, frac in 0.0..0.99f64) {
        prop_assert!(l1_adversary_next(x, t, g, frac * g).abs() <= g);
    }

    #[test]
    fn svmlight_round_trips(label in 0u8..2, feats in prop::collection::btree_map(1usize..100, -1e3..1e3f64, 0..10)) {
        let e = Example::new(label, feats).unwrap();
        let line = e.to_svmlight();
        let back = parse_svmlight(&line).unwrap();
        prop_assert_eq!(&back, &e);
        prop_assert_eq!(back.to_svmlight(), line);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn run_csv_is_deterministic_and_bounded(seed in any::<u64>(), learner in prop::sample::select(vec!["dual-averaging", "ftrl-proximal", "adagrad-proximal", "entropic", "constant-ogd"])) {
        let cfg = Config::parse(&format!("learner = {learner}\nT = 80\nn = 4\nseed = {seed}")).unwrap();
        let render = || {
            let run = run_experiment(&cfg).unwrap();
            let mut buf = Vec::new();
            write_run_csv(&mut buf, &run).unwrap();
            (run.record.first_bound_violation(), buf)
        };
        let (violation, a) = render();
        let (_, b) = render();
        prop_assert_eq!(violation, None);
        prop_assert_eq!(a, b);
    }
}
