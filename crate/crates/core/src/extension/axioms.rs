//! Randomized check of (comp), (equ) and (dir) on the fragment.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{Context, HyperNat};
use crate::eqp::EqpFunction;
use crate::random::{random_function, random_point};

#[derive(Clone, Copy, PartialEq, Eq, Default, Debug, Serialize)]
pub struct Tally {
    pub passed: u64,
    pub failed: u64,
}

impl Tally {
    fn record(&mut self, ok: bool) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
        }
    }

    fn merge(self, other: Tally) -> Tally {
        Tally {
            passed: self.passed + other.passed,
            failed: self.failed + other.failed,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AxiomFailure {
    pub axiom: &'static str,
    /// Seed that regenerates `(f, g, ξ)`.
    pub sample_seed: u64,
    pub f: String,
    pub g: String,
    pub xi: String,
}

#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AxiomReport {
    pub samples: u64,
    pub comp: Tally,
    pub equ: Tally,
    pub dir: Tally,
    pub failures: Vec<AxiomFailure>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// Combines reports of disjoint sample ranges.
    pub fn merge(mut self, other: AxiomReport) -> AxiomReport {
        self.samples += other.samples;
        self.comp = self.comp.merge(other.comp);
        self.equ = self.equ.merge(other.equ);
        self.dir = self.dir.merge(other.dir);
        self.failures.extend(other.failures);
        self
    }
}

/// Points checked pointwise by the (dir) witness in the suite.
pub const DIR_CHECK_POINTS: u64 = 64;

/// The triple used by sample `seed`.
pub fn sample(seed: u64) -> (EqpFunction, EqpFunction, HyperNat) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = random_function(&mut rng);
    let g = random_function(&mut rng);
    let xi = random_point(&mut rng);
    (f, g, xi)
}

/// `*g(*f(ξ)) = *(g∘f)(ξ)`, compared both as representatives and as points.
pub fn check_comp(ctx: &Context, f: &EqpFunction, g: &EqpFunction, xi: &HyperNat) -> bool {
    let lhs = ctx.star_apply(g, &ctx.star_apply(f, xi));
    let rhs = ctx.star_apply(&g.compose(f), xi);
    lhs == rhs && ctx.hyper_equal(&lhs, &rhs)
}

/// `*χ_{fg}(ξ) = 1` iff `*f(ξ) = *g(ξ)`, with `*χ_{fg}(ξ) ∈ {0, 1}`.
pub fn check_equ(ctx: &Context, f: &EqpFunction, g: &EqpFunction, xi: &HyperNat) -> bool {
    let chi = EqpFunction::characteristic(&f.equalizer(g));
    let v = ctx.star_apply(&chi, xi);
    let one = ctx.hyper_equal(&v, &HyperNat::standard(1));
    let zero = ctx.hyper_equal(&v, &HyperNat::standard(0));
    let same = ctx.hyper_equal(&ctx.star_apply(f, xi), &ctx.star_apply(g, xi));
    one != zero && one == same
}

pub fn axiom_shard(ctx: &Context, start: u64, count: u64) -> AxiomReport {
    let mut report = AxiomReport::default();
    for i in start..start + count {
        let seed = ctx.seed.wrapping_add(i);
        let (f, g, xi) = sample(seed);
        let (fx, gx) = (ctx.star_apply(&f, &xi), ctx.star_apply(&g, &xi));
        let outcomes = [
            ("comp", check_comp(ctx, &f, &g, &xi)),
            ("equ", check_equ(ctx, &f, &g, &xi)),
            (
                "dir",
                ctx.dir_witness(&fx, &gx, DIR_CHECK_POINTS).verified(),
            ),
        ];
        report.samples += 1;
        report.comp.record(outcomes[0].1);
        report.equ.record(outcomes[1].1);
        report.dir.record(outcomes[2].1);
        for (axiom, ok) in outcomes {
            if !ok {
                report.failures.push(AxiomFailure {
                    axiom,
                    sample_seed: seed,
                    f: f.to_string(),
                    g: g.to_string(),
                    xi: xi.to_string(),
                });
            }
        }
    }
    report
}

/// Runs `ctx.samples` samples with seeds `ctx.seed, ctx.seed + 1, ...`.
pub fn axiom_suite(ctx: &Context) -> AxiomReport {
    axiom_shard(ctx, 0, ctx.samples as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Poly;
    use crate::ultrafilter::UltrafilterHandle;

    #[test]
    fn suite_passes_on_integer_ambient() {
        let ctx = Context::new(UltrafilterHandle::integer_like(0)).with_samples(60);
        let r = axiom_suite(&ctx);
        assert_eq!(r.samples, 60);
        assert!(r.passed(), "{:?}", r.failures);
    }

    #[test]
    fn empty_suite_passes() {
        let ctx = Context::new(UltrafilterHandle::integer_like(0)).with_samples(0);
        let r = axiom_suite(&ctx);
        assert_eq!(r.samples, 0);
        assert!(r.passed());
    }

    #[test]
    fn adversarial_equ_pair() {
        let ctx = Context::new(UltrafilterHandle::integer_like(0));
        let sq = EqpFunction::polynomial(Poly::from_int_coeffs(&[0, 0, 1])).unwrap();
        let id = EqpFunction::identity();
        let xi = HyperNat::diagonal();
        assert!(check_equ(&ctx, &id, &sq, &xi));
        let chi = EqpFunction::characteristic(&id.equalizer(&sq));
        assert!(ctx.hyper_equal(&ctx.star_apply(&chi, &xi), &HyperNat::standard(0)));
    }

    #[test]
    fn shards_merge_to_the_whole() {
        let ctx = Context::new(UltrafilterHandle::integer_like(0)).with_samples(20);
        let whole = axiom_suite(&ctx);
        let parts = axiom_shard(&ctx, 0, 7).merge(axiom_shard(&ctx, 7, 13));
        assert_eq!(whole, parts);
    }
}
