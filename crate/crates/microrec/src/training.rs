//! Online supervised training of the grading parameters, one pass over each
//! user's recommendation records with a momentum update.
//!
//! The per-record error is `result - grade`. The printed partial derivatives
//! are taken as gradients of the grade, so each update follows the delta
//! rule `eta * error * d(grade)/d(theta)` inside the momentum scheme
//! `update = eta * ((1 - beta) * error * delta + beta * prev_update)`.
//! Training a user stops when the records run out or the absolute error
//! falls to the performance threshold. Fake users are never trained: their
//! grading function has no parameters.
//!
//! Sample contexts (fond, hot, sim, time factor, omega sums) are computed
//! once per record against the prebuilt profiles; omega updates feed the
//! gradient kernel only, matching the rounding already applied to the
//! printed omega derivatives.

use std::collections::BTreeMap;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::dataset::{Dataset, RecLogRecord, UserId};
use crate::error::{Error, Result};
use crate::interest::{
    fondness, key_class, related_users, sigmoid_f, similarity, DepthPolicy, FamiliarityWeights,
    InterestIndex, ProfileSet,
};
use crate::mining::KeywordClassSet;
use crate::scoring::{
    grade, revised_grade, time_factor, AcceptanceHistory, GradingParams, PopularityIndex,
};
use crate::taxonomy::{Taxonomy, UserClass};

// ---------------------------------------------------------------------------
// Configuration and state
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainingConfig {
    /// Momentum factor in [0, 1].
    pub beta: f64,
    /// Absolute-error threshold that terminates a user's pass.
    pub performance: f64,
    /// Learning-rate scale.
    pub eta: f64,
    /// Update omega1/omega2 as well as alpha1.
    pub train_omegas: bool,
    /// Grade records with the revised (time-decayed) grading function.
    pub use_time_decay: bool,
    /// Seed of the stochastic parameter initialization.
    pub seed: u64,
}

impl Default for TrainingConfig {
    fn default() -> Self {
        TrainingConfig {
            beta: 0.9,
            performance: 0.01,
            eta: 1.0,
            train_omegas: false,
            use_time_decay: false,
            seed: 0,
        }
    }
}

impl TrainingConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.beta) {
            return Err(Error::Config(format!(
                "beta must lie in [0, 1], got {}",
                self.beta
            )));
        }
        if self.performance.is_nan() || self.performance <= 0.0 {
            return Err(Error::Config(format!(
                "performance must be positive, got {}",
                self.performance
            )));
        }
        if self.eta.is_nan() || self.eta <= 0.0 {
            return Err(Error::Config(format!(
                "eta must be positive, got {}",
                self.eta
            )));
        }
        Ok(())
    }
}

/// Evolving parameters of one user's training pass. `omega3` is implied as
/// `1 - omega1 - omega2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainingState {
    pub alpha1: f64,
    pub omega1: f64,
    pub omega2: f64,
    pub delta_alpha1: f64,
    pub delta_omega1: f64,
    pub delta_omega2: f64,
    pub epoch: u64,
    pub last_error: Option<f64>,
}

impl TrainingState {
    pub fn new(alpha1: f64) -> Self {
        TrainingState {
            alpha1,
            omega1: 1.0 / 3.0,
            omega2: 1.0 / 3.0,
            delta_alpha1: 0.0,
            delta_omega1: 0.0,
            delta_omega2: 0.0,
            epoch: 0,
            last_error: None,
        }
    }

    pub fn omega3(&self) -> f64 {
        1.0 - self.omega1 - self.omega2
    }
}

/// Stochastic initialization: alpha1 uniform on [0.1, 0.9], derived from
/// the seed and the user id so it does not depend on training order.
pub fn initial_state(seed: u64, user: UserId) -> TrainingState {
    let mixed = seed ^ user.0.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    let mut rng = ChaCha8Rng::seed_from_u64(mixed);
    TrainingState::new(rng.gen_range(0.1..0.9))
}

// ---------------------------------------------------------------------------
// Error, gradients, momentum
// ---------------------------------------------------------------------------

/// `error = result - grade`, in [-2, 2].
pub fn training_error(result: f64, predicted_grade: f64) -> f64 {
    debug_assert!(predicted_grade.abs() <= 1.0 + 1e-12);
    result - predicted_grade
}

/// Everything about one record that the grade and its gradients need.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleContext {
    /// +1 accepted, -1 rejected.
    pub result: f64,
    pub fond: f64,
    pub hot: f64,
    pub sim: f64,
    /// Time factor in [1, lambda]; 1 when the category was never accepted
    /// (and irrelevant while time decay is off).
    pub time_factor: f64,
    /// Sign of the summed components of class_weight(u) - class_weight(i).
    pub sigma: f64,
    /// Sum over interest classes of the rounded dW/d(omega1):
    /// 1/2 * sum of related users' class mass times (f(at) - f(comment)).
    pub dw1: f64,
    /// Same for omega2 with (f(retweet) - f(comment)).
    pub dw2: f64,
}

/// Gradient of the grade with respect to (alpha1, omega1, omega2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gradients {
    pub alpha1: f64,
    pub omega1: f64,
    pub omega2: f64,
}

/// The printed gradient kernel: `d/d(alpha1) = 2 fond (hot - sim)` and
/// `d/d(omega_i) = 2 sigma alpha2 fond dw_i`, with the `(2/lambda) time`
/// prefactor replacing the 2 when the revised grade is in use. Omega
/// gradients are 0 while omega training is off.
pub fn grade_gradients(
    ctx: &SampleContext,
    alpha1: f64,
    lambda: f64,
    config: &TrainingConfig,
) -> Gradients {
    let front = if config.use_time_decay {
        (2.0 / lambda) * ctx.time_factor
    } else {
        2.0
    };
    let alpha1_grad = front * ctx.fond * (ctx.hot - ctx.sim);
    let (omega1, omega2) = if config.train_omegas {
        let alpha2 = 1.0 - alpha1;
        let common = front * ctx.sigma * alpha2 * ctx.fond;
        (common * ctx.dw1, common * ctx.dw2)
    } else {
        (0.0, 0.0)
    };
    Gradients {
        alpha1: alpha1_grad,
        omega1,
        omega2,
    }
}

/// `update = eta * ((1 - beta) * error * delta + beta * prev_update)`;
/// the parameter is clipped to `[lo, hi]` while the returned update (the
/// next momentum carry) is kept pre-clip.
pub fn momentum_step(
    param: f64,
    error: f64,
    delta: f64,
    prev_update: f64,
    beta: f64,
    eta: f64,
    (lo, hi): (f64, f64),
) -> (f64, f64) {
    let update = eta * ((1.0 - beta) * error * delta + beta * prev_update);
    ((param + update).clamp(lo, hi), update)
}

/// Euclidean projection of (x, y) onto {x >= 0, y >= 0, x + y <= 1}, the
/// feasible set of (omega1, omega2).
pub fn project_omega_pair(x: f64, y: f64) -> (f64, f64) {
    let qx = x.max(0.0);
    let qy = y.max(0.0);
    if qx + qy <= 1.0 {
        return (qx, qy);
    }
    // Candidates on each face of the triangle; the closest wins.
    let t = (x + y - 1.0) / 2.0;
    let diag = {
        let (px, py) = (x - t, y - t);
        if px < 0.0 {
            (0.0, 1.0)
        } else if py < 0.0 {
            (1.0, 0.0)
        } else {
            (px, py)
        }
    };
    let candidates = [
        diag,
        (0.0, y.clamp(0.0, 1.0)),
        (x.clamp(0.0, 1.0), 0.0),
    ];
    let dist2 = |(cx, cy): (f64, f64)| (x - cx).powi(2) + (y - cy).powi(2);
    candidates
        .into_iter()
        .filter(|&(cx, cy)| cx + cy <= 1.0 + 1e-12)
        .min_by(|&a, &b| dist2(a).partial_cmp(&dist2(b)).expect("finite"))
        .expect("at least one feasible candidate")
}

/// Grade predicted by the context under the current parameters; the revised
/// variant multiplies by `time / lambda`.
pub fn predicted_grade(
    ctx: &SampleContext,
    alpha1: f64,
    lambda: f64,
    use_time_decay: bool,
) -> f64 {
    let params = GradingParams::new(alpha1, lambda).expect("feasible parameters");
    let g = grade(ctx.fond, ctx.hot, ctx.sim, &params).expect("indicators in range");
    if use_time_decay {
        revised_grade(g, ctx.time_factor, lambda)
    } else {
        g
    }
}

// ---------------------------------------------------------------------------
// Per-user training
// ---------------------------------------------------------------------------

/// One pass over prepared sample contexts: each is presented once, updates
/// apply in order, and the pass stops early once |error| reaches the
/// performance threshold.
pub fn train_on_contexts(
    contexts: &[SampleContext],
    lambda: f64,
    config: &TrainingConfig,
    initial: TrainingState,
) -> TrainingState {
    let mut state = initial;
    for ctx in contexts {
        state.epoch += 1;
        let predicted = predicted_grade(ctx, state.alpha1, lambda, config.use_time_decay);
        let error = training_error(ctx.result, predicted);
        state.last_error = Some(error);
        if error.abs() <= config.performance {
            break;
        }
        let grads = grade_gradients(ctx, state.alpha1, lambda, config);
        let (alpha1, delta_alpha1) = momentum_step(
            state.alpha1,
            error,
            grads.alpha1,
            state.delta_alpha1,
            config.beta,
            config.eta,
            (0.0, 1.0),
        );
        state.alpha1 = alpha1;
        state.delta_alpha1 = delta_alpha1;
        if config.train_omegas {
            let (w1, d1) = momentum_step(
                state.omega1,
                error,
                grads.omega1,
                state.delta_omega1,
                config.beta,
                config.eta,
                (0.0, 1.0),
            );
            let (w2, d2) = momentum_step(
                state.omega2,
                error,
                grads.omega2,
                state.delta_omega2,
                config.beta,
                config.eta,
                (0.0, 1.0),
            );
            let (w1, w2) = project_omega_pair(w1, w2);
            state.omega1 = w1;
            state.omega2 = w2;
            state.delta_omega1 = d1;
            state.delta_omega2 = d2;
        }
    }
    state
}

/// Read-only inputs shared by every user's training pass.
pub struct TrainerDeps<'a> {
    pub dataset: &'a Dataset,
    pub classes: &'a KeywordClassSet,
    pub profiles: &'a ProfileSet,
    pub index: &'a InterestIndex,
    pub popularity: &'a PopularityIndex,
    pub familiarity: FamiliarityWeights,
    pub depths: DepthPolicy,
    pub lambda: f64,
}

impl TrainerDeps<'_> {
    /// Sum over related users of their keyword-class mass scaled by the
    /// interaction-count sigmoid differences; the rounded dW/d(omega) terms.
    fn omega_sums(&self, user: UserId, class: UserClass) -> (f64, f64) {
        let depth = match class {
            UserClass::Active => self.depths.active,
            UserClass::Inactive => self.depths.inactive,
            UserClass::Fake => return (0.0, 0.0),
        };
        let mut dw1 = 0.0;
        let mut dw2 = 0.0;
        for (related, _) in related_users(self.dataset, user, depth, &self.familiarity) {
            let Some(record) = self.dataset.user(related) else {
                continue;
            };
            let mass = key_class(&record.keywords, self.classes).total();
            if mass == 0.0 {
                continue;
            }
            let counts = self
                .dataset
                .interaction(user, related)
                .map(|c| (c.at, c.retweet, c.comment))
                .unwrap_or((0, 0, 0));
            let f_at = sigmoid_f(counts.0 as f64);
            let f_retweet = sigmoid_f(counts.1 as f64);
            let f_comment = sigmoid_f(counts.2 as f64);
            dw1 += 0.5 * mass * (f_at - f_comment);
            dw2 += 0.5 * mass * (f_retweet - f_comment);
        }
        (dw1, dw2)
    }

    fn sample_context(
        &self,
        record: &RecLogRecord,
        history: &AcceptanceHistory,
        omega_sums: (f64, f64),
        use_time_decay: bool,
    ) -> Result<SampleContext> {
        let profile = self
            .profiles
            .get(record.user)
            .ok_or(Error::UnknownUser(record.user))?;
        let item = self
            .dataset
            .item(record.item)
            .ok_or_else(|| Error::InvalidInput(format!("unknown item {}", record.item)))?;
        let item_weights = self.index.item_weights(record.item);
        let fond = fondness(&profile.merged, self.index.category_weights(item.category));
        let hot = self
            .popularity
            .hot(record.item)
            .expect("popularity covers all items");
        let sim = similarity(&profile.merged, item_weights);
        let factor = if use_time_decay {
            match history.offset_days(record.user, item.category, record.timestamp) {
                Some(t) => time_factor(t, self.lambda)?,
                None => 1.0,
            }
        } else {
            1.0
        };
        let sigma = {
            let diff = profile.merged.total() - item_weights.total();
            if diff > 0.0 {
                1.0
            } else if diff < 0.0 {
                -1.0
            } else {
                0.0
            }
        };
        Ok(SampleContext {
            result: record.outcome.value(),
            fond,
            hot,
            sim,
            time_factor: factor,
            sigma,
            dw1: omega_sums.0,
            dw2: omega_sums.1,
        })
    }
}

/// Train one user on their records (which must be sorted by timestamp).
/// An empty record list returns the initial state unchanged.
pub fn train_user(
    user: UserId,
    records: &[RecLogRecord],
    deps: &TrainerDeps<'_>,
    config: &TrainingConfig,
    initial: TrainingState,
) -> Result<TrainingState> {
    debug_assert!(records.windows(2).all(|w| w[0].timestamp <= w[1].timestamp));
    let profile = deps.profiles.get(user).ok_or(Error::UnknownUser(user))?;
    let omega_sums = if config.train_omegas {
        deps.omega_sums(user, profile.class)
    } else {
        (0.0, 0.0)
    };
    // The online acceptance history grows record by record, so each grade
    // only sees acceptances from its own past.
    let mut history = AcceptanceHistory::default();
    let mut contexts = Vec::with_capacity(records.len());
    for record in records {
        contexts.push(deps.sample_context(record, &history, omega_sums, config.use_time_decay)?);
        history.observe(record, deps.dataset);
    }
    // Contexts are fixed per record; replay them through the update loop.
    Ok(train_on_contexts(&contexts, deps.lambda, config, initial))
}

// ---------------------------------------------------------------------------
// Corpus-level training
// ---------------------------------------------------------------------------

/// Per-class parameters produced by training (or configured defaults).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainedParams {
    pub alpha1: f64,
    pub omega1: f64,
    pub omega2: f64,
    pub omega3: f64,
}

/// Train every active and inactive user that has at least one record.
/// Returns the per-user final states, keyed by user id.
pub fn train_all(
    records: &[RecLogRecord],
    taxonomy: &Taxonomy,
    deps: &TrainerDeps<'_>,
    config: &TrainingConfig,
) -> Result<BTreeMap<UserId, TrainingState>> {
    config.validate()?;
    let mut per_user: BTreeMap<UserId, Vec<RecLogRecord>> = BTreeMap::new();
    for r in records {
        if taxonomy.class(r.user) != Some(UserClass::Fake) {
            per_user.entry(r.user).or_default().push(*r);
        }
    }
    let trained: Vec<(UserId, TrainingState)> = per_user
        .par_iter()
        .map(|(&user, records)| {
            let state = train_user(
                user,
                records,
                deps,
                config,
                initial_state(config.seed, user),
            )?;
            Ok((user, state))
        })
        .collect::<Result<_>>()?;
    Ok(trained.into_iter().collect())
}

/// Average the per-user final parameters within each user class; classes
/// with no trained users keep the supplied defaults. Fake users are never
/// present in the input.
pub fn aggregate_params(
    states: &BTreeMap<UserId, TrainingState>,
    taxonomy: &Taxonomy,
    defaults: &BTreeMap<UserClass, TrainedParams>,
) -> BTreeMap<UserClass, TrainedParams> {
    let mut sums: BTreeMap<UserClass, (f64, f64, f64, usize)> = BTreeMap::new();
    for (&user, state) in states {
        let Some(class) = taxonomy.class(user) else {
            continue;
        };
        if class == UserClass::Fake {
            continue;
        }
        let entry = sums.entry(class).or_insert((0.0, 0.0, 0.0, 0));
        entry.0 += state.alpha1;
        entry.1 += state.omega1;
        entry.2 += state.omega2;
        entry.3 += 1;
    }
    let mut out = BTreeMap::new();
    for (&class, &default) in defaults {
        let params = match sums.get(&class) {
            Some(&(a, w1, w2, n)) if n > 0 => {
                let n = n as f64;
                TrainedParams {
                    alpha1: a / n,
                    omega1: w1 / n,
                    omega2: w2 / n,
                    omega3: 1.0 - w1 / n - w2 / n,
                }
            }
            _ => default,
        };
        out.insert(class, params);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interest::build_profiles;
    use crate::scoring::build_popularity;
    use crate::taxonomy::{classify_all, TaxonomyConfig};
    use crate::testutil::CorpusBuilder;

    fn ctx(result: f64, fond: f64, hot: f64, sim: f64) -> SampleContext {
        SampleContext {
            result,
            fond,
            hot,
            sim,
            time_factor: 1.0,
            sigma: 0.0,
            dw1: 0.0,
            dw2: 0.0,
        }
    }

    #[test]
    fn training_error_examples() {
        assert_eq!(training_error(1.0, 1.0), 0.0);
        assert_eq!(training_error(-1.0, 1.0), -2.0);
        assert_eq!(training_error(1.0, 0.5), 0.5);
    }

    #[test]
    fn alpha_gradient_examples() {
        let config = TrainingConfig::default();
        let g = grade_gradients(&ctx(1.0, 0.5, 0.4, 0.9), 0.5, 2.0, &config);
        assert!((g.alpha1 - (-0.5)).abs() < 1e-12);
        let g = grade_gradients(&ctx(1.0, 0.5, 0.7, 0.7), 0.5, 2.0, &config);
        assert_eq!(g.alpha1, 0.0);
        // Omega gradients stay 0 while omega training is off.
        assert_eq!(g.omega1, 0.0);
        assert_eq!(g.omega2, 0.0);
    }

    #[test]
    fn decayed_gradient_at_t0_matches_plain() {
        let config = TrainingConfig {
            use_time_decay: true,
            ..TrainingConfig::default()
        };
        let plain_config = TrainingConfig::default();
        let mut sample = ctx(1.0, 0.5, 0.4, 0.9);
        sample.time_factor = 2.0; // t = 0 with lambda = 2
        let decayed = grade_gradients(&sample, 0.5, 2.0, &config);
        let plain = grade_gradients(&sample, 0.5, 2.0, &plain_config);
        assert!((decayed.alpha1 - plain.alpha1).abs() < 1e-12);
    }

    #[test]
    fn gradient_matches_finite_difference() {
        let config = TrainingConfig::default();
        let sample = ctx(1.0, 0.62, 0.31, 0.87);
        let h = 1e-6;
        for &alpha in &[0.2, 0.5, 0.8] {
            let fd = (predicted_grade(&sample, alpha + h, 2.0, false)
                - predicted_grade(&sample, alpha - h, 2.0, false))
                / (2.0 * h);
            let g = grade_gradients(&sample, alpha, 2.0, &config).alpha1;
            assert!((fd - g).abs() < 1e-6, "alpha {alpha}: fd {fd} vs {g}");
        }
    }

    #[test]
    fn momentum_step_examples() {
        // beta = 0: the plain delta rule.
        let (p, u) = momentum_step(0.5, 0.5, -2.0, 123.0, 0.0, 1.0, (0.0, 1.0));
        assert_eq!(u, -1.0);
        assert_eq!(p, 0.0);
        // Pure momentum: delta 0 carries 0.9 of the previous update.
        let (p, u) = momentum_step(0.5, 7.0, 0.0, 0.1, 0.9, 1.0, (0.0, 1.0));
        assert!((u - 0.09).abs() < 1e-12);
        assert!((p - 0.59).abs() < 1e-12);
        // Clipping keeps the parameter feasible but not the carry.
        let (p, u) = momentum_step(0.99, 1.0, 1.0, 0.0, 0.0, 1.0, (0.0, 1.0));
        assert_eq!(p, 1.0);
        assert_eq!(u, 1.0);
    }

    #[test]
    fn omega_projection() {
        assert_eq!(project_omega_pair(0.2, 0.3), (0.2, 0.3));
        assert_eq!(project_omega_pair(-0.5, 0.4), (0.0, 0.4));
        let (x, y) = project_omega_pair(0.8, 0.8);
        assert!((x - 0.5).abs() < 1e-12 && (y - 0.5).abs() < 1e-12);
        let (x, y) = project_omega_pair(1.8, -0.5);
        assert!(x >= 0.0 && y >= 0.0 && x + y <= 1.0 + 1e-12);
    }

    #[test]
    fn empty_records_leave_state_unchanged() {
        let initial = TrainingState::new(0.4);
        let out = train_on_contexts(&[], 2.0, &TrainingConfig::default(), initial);
        assert_eq!(out, initial);
    }

    #[test]
    fn tiny_error_terminates_immediately() {
        // fond = 1, hot = sim = 1 gives grade 1 and error 0 on an accept.
        let contexts = vec![ctx(1.0, 1.0, 1.0, 1.0), ctx(-1.0, 1.0, 1.0, 1.0)];
        let out = train_on_contexts(
            &contexts,
            2.0,
            &TrainingConfig::default(),
            TrainingState::new(0.5),
        );
        assert_eq!(out.epoch, 1);
        assert_eq!(out.last_error, Some(0.0));
        assert_eq!(out.alpha1, 0.5);
    }

    /// Separable fixture: accepted records have sim 1 / hot 0, rejected the
    /// reverse. Both push alpha1 towards 0.
    fn separable_contexts(n: usize) -> Vec<SampleContext> {
        (0..n)
            .map(|i| {
                if i % 2 == 0 {
                    ctx(1.0, 1.0, 0.0, 1.0)
                } else {
                    ctx(-1.0, 1.0, 1.0, 0.0)
                }
            })
            .collect()
    }

    #[test]
    fn separable_fixture_converges_monotonically() {
        let config = TrainingConfig::default();
        let contexts = separable_contexts(200);
        let mut state = TrainingState::new(0.5);
        let mut previous = state.alpha1;
        for sample in &contexts {
            let next = train_on_contexts(
                std::slice::from_ref(sample),
                2.0,
                &config,
                state,
            );
            assert!(next.alpha1 <= previous + 1e-12, "alpha1 must not rise");
            previous = next.alpha1;
            state = next;
            if state.last_error.map(f64::abs).unwrap_or(1.0) <= config.performance {
                break;
            }
        }
        assert!(state.last_error.unwrap().abs() <= config.performance);
        assert!(state.epoch <= 200);
    }

    #[test]
    fn beta_zero_equals_plain_delta_rule() {
        let config = TrainingConfig {
            beta: 0.0,
            ..TrainingConfig::default()
        };
        let contexts = separable_contexts(40);
        let trained = train_on_contexts(&contexts, 2.0, &config, TrainingState::new(0.5));

        // Hand-rolled delta rule.
        let mut alpha: f64 = 0.5;
        let mut epochs = 0;
        let mut last = None;
        for sample in &contexts {
            epochs += 1;
            let g = predicted_grade(sample, alpha, 2.0, false);
            let error = sample.result - g;
            last = Some(error);
            if error.abs() <= config.performance {
                break;
            }
            let delta = 2.0 * sample.fond * (sample.hot - sample.sim);
            alpha = (alpha + config.eta * error * delta).clamp(0.0, 1.0);
        }
        assert_eq!(trained.alpha1, alpha);
        assert_eq!(trained.epoch, epochs);
        assert_eq!(trained.last_error, last);
    }

    fn training_corpus() -> Dataset {
        CorpusBuilder::new()
            .user(1, 150)
            .user(2, 50)
            .user(3, 0)
            .user(4, 200)
            .user(20, 0)
            .user(21, 0)
            .keywords(1, "1:0.5;2:0.5")
            .keywords(2, "1:1")
            .keywords(4, "2:1")
            .item(20, "a.b", "1;2")
            .item(21, "c.d", "3")
            .action(1, 20, 30, 0, 0)
            .action(2, 20, 25, 0, 0)
            .action(4, 20, 40, 0, 0)
            .record(1, 20, 1, 100)
            .record(1, 21, -1, 200)
            .record(2, 20, 1, 300)
            .record(3, 20, 1, 400)
            .build()
    }

    fn run_training(ds: &Dataset, seed: u64) -> BTreeMap<UserId, TrainingState> {
        let classes = crate::mining::mine_keyword_classes(
            ds,
            &crate::mining::MiningConfig::default(),
        );
        let taxonomy = classify_all(ds, &TaxonomyConfig::default());
        let index = InterestIndex::build(ds, &classes);
        let popularity = build_popularity(ds);
        let profiles = build_profiles(
            ds,
            &classes,
            &taxonomy,
            &FamiliarityWeights::default(),
            &DepthPolicy::default(),
        );
        let deps = TrainerDeps {
            dataset: ds,
            classes: &classes,
            profiles: &profiles,
            index: &index,
            popularity: &popularity,
            familiarity: FamiliarityWeights::default(),
            depths: DepthPolicy::default(),
            lambda: 2.0,
        };
        let config = TrainingConfig {
            seed,
            ..TrainingConfig::default()
        };
        train_all(ds.rec_log(), &taxonomy, &deps, &config).unwrap()
    }

    #[test]
    fn train_all_skips_fake_users_and_is_deterministic() {
        let ds = training_corpus();
        let a = run_training(&ds, 7);
        let b = run_training(&ds, 7);
        assert_eq!(a, b);
        // User 3 is fake (0 tweets) and must not be trained.
        assert!(!a.contains_key(&UserId(3)));
        assert!(a.contains_key(&UserId(1)));
        assert!(a.contains_key(&UserId(2)));
        // Parameters stay feasible.
        for state in a.values() {
            assert!((0.0..=1.0).contains(&state.alpha1));
            assert!(state.omega1 >= 0.0 && state.omega2 >= 0.0);
            assert!(state.omega1 + state.omega2 <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn aggregate_means_and_defaults() {
        let ds = training_corpus();
        let taxonomy = classify_all(&ds, &TaxonomyConfig::default());
        let default = TrainedParams {
            alpha1: 0.33,
            omega1: 1.0 / 3.0,
            omega2: 1.0 / 3.0,
            omega3: 1.0 / 3.0,
        };
        let defaults: BTreeMap<UserClass, TrainedParams> = [
            (UserClass::Active, default),
            (UserClass::Inactive, default),
        ]
        .into_iter()
        .collect();

        // Users 1 and 4 are active with alpha1 0.30 and 0.36 -> mean 0.33;
        // no trained inactive users -> configured default retained.
        let mut states = BTreeMap::new();
        states.insert(UserId(1), TrainingState::new(0.30));
        states.insert(UserId(4), TrainingState::new(0.36));
        let out = aggregate_params(&states, &taxonomy, &defaults);
        assert!((out[&UserClass::Active].alpha1 - 0.33).abs() < 1e-12);
        assert_eq!(out[&UserClass::Inactive].alpha1, 0.33);

        // A single trained inactive user pins that class to its value.
        states.insert(UserId(2), TrainingState::new(0.5));
        let out = aggregate_params(&states, &taxonomy, &defaults);
        assert_eq!(out[&UserClass::Inactive].alpha1, 0.5);

        // Only fake users -> defaults retained everywhere.
        let mut fake_only = BTreeMap::new();
        fake_only.insert(UserId(3), TrainingState::new(0.9));
        let out = aggregate_params(&fake_only, &taxonomy, &defaults);
        assert_eq!(out[&UserClass::Active].alpha1, 0.33);
        assert_eq!(out[&UserClass::Inactive].alpha1, 0.33);
    }
}
