//! The three-level filter model applied to candidate sets.
//!
//! - Level 1 (no-go): optional hard exclusions, cheapest checks first.
//! - Level 2 (feasibility): mandatory; every surviving solution must pass.
//! - Level 3 (ranking): scores survivors and keeps the most promising k.
//!
//! Filters only ever remove candidates — they never modify payloads — so the
//! survivor set of a layer is always a subset of what its generator emitted.

/// A filter level. Lower levels run first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FilterLevel {
    /// Optional hard exclusion of known no-go candidates.
    NoGo = 1,
    /// Mandatory feasibility check.
    Feasibility = 2,
    /// Ranking and truncation to the most promising candidates.
    Ranking = 3,
}

impl FilterLevel {
    /// Index into per-level count arrays (`[no-go, feasibility, ranking]`).
    pub fn slot(self) -> usize {
        self as usize - 1
    }
}

/// How many candidates a ranking rule retains.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Keep {
    /// No truncation; the rule only orders candidates by score.
    All,
    /// Keep the best `k` (ascending score). `k` must be positive.
    Top(usize),
}

type Predicate<P, C> = Box<dyn Fn(&P, &C) -> bool + Send + Sync>;
type Score<P, C> = Box<dyn Fn(&P, &C) -> f64 + Send + Sync>;

enum RuleKind<P, C> {
    /// Level 1 or 2: candidate survives iff the predicate accepts it.
    Predicate(FilterLevel, Predicate<P, C>),
    /// Level 3: candidates are sorted ascending by score, then truncated.
    Ranking(Score<P, C>, Keep),
}

/// A named filter rule at one of the three levels.
///
/// Predicates and scores must be pure: the same candidate yields the same
/// verdict on every call, which is what makes reruns reproducible.
pub struct FilterRule<P, C> {
    name: String,
    kind: RuleKind<P, C>,
}

impl<P, C> FilterRule<P, C> {
    /// A level-1 rule; candidates the predicate rejects are hard no-gos.
    pub fn no_go(name: impl Into<String>, accept: impl Fn(&P, &C) -> bool + Send + Sync + 'static) -> Self {
        Self { name: name.into(), kind: RuleKind::Predicate(FilterLevel::NoGo, Box::new(accept)) }
    }

    /// A level-2 rule; candidates the predicate rejects are infeasible.
    pub fn feasibility(
        name: impl Into<String>,
        accept: impl Fn(&P, &C) -> bool + Send + Sync + 'static,
    ) -> Self {
        Self { name: name.into(), kind: RuleKind::Predicate(FilterLevel::Feasibility, Box::new(accept)) }
    }

    /// A level-3 rule; keeps the `keep` best candidates by ascending score.
    pub fn ranking(
        name: impl Into<String>,
        score: impl Fn(&P, &C) -> f64 + Send + Sync + 'static,
        keep: Keep,
    ) -> Self {
        Self { name: name.into(), kind: RuleKind::Ranking(Box::new(score), keep) }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn level(&self) -> FilterLevel {
        match &self.kind {
            RuleKind::Predicate(level, _) => *level,
            RuleKind::Ranking(..) => FilterLevel::Ranking,
        }
    }

    /// Retention of a ranking rule; `None` for predicate rules.
    pub fn keep(&self) -> Option<Keep> {
        match &self.kind {
            RuleKind::Predicate(..) => None,
            RuleKind::Ranking(_, keep) => Some(*keep),
        }
    }

    /// Applies a level-1/2 predicate. Panics on ranking rules.
    pub fn accepts(&self, candidate: &P, ctx: &C) -> bool {
        match &self.kind {
            RuleKind::Predicate(_, accept) => accept(candidate, ctx),
            RuleKind::Ranking(..) => unreachable!("ranking rules have no accept predicate"),
        }
    }

    /// Whether a ranking rule would truncate a candidate set of `len`.
    fn truncates_at(&self, len: usize) -> Option<usize> {
        match &self.kind {
            RuleKind::Ranking(_, Keep::Top(k)) if len > *k => Some(*k),
            _ => None,
        }
    }
}

/// Which filter levels a generator already enforces while emitting
/// candidates. Integrated levels are not re-applied after generation (their
/// rules remain declared for auditing and whole-solution checks).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct IntegratedLevels {
    pub no_go: bool,
    pub feasibility: bool,
}

impl IntegratedLevels {
    pub const NONE: Self = Self { no_go: false, feasibility: false };
    pub const FEASIBILITY: Self = Self { no_go: false, feasibility: true };
    pub const BOTH: Self = Self { no_go: true, feasibility: true };

    pub fn contains(self, level: FilterLevel) -> bool {
        match level {
            FilterLevel::NoGo => self.no_go,
            FilterLevel::Feasibility => self.feasibility,
            FilterLevel::Ranking => false,
        }
    }
}

/// Result of filtering one candidate set.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterOutcome<P> {
    /// Candidates that passed every applied rule, ranking order last.
    pub survivors: Vec<P>,
    /// Removal counts indexed by [`FilterLevel::slot`].
    pub removed_by_level: [u64; 3],
    /// Removal counts aligned with the rule slice passed in.
    pub removed_by_rule: Vec<u64>,
    /// Level of the removal applied last, if any candidate was removed.
    pub last_removal: Option<FilterLevel>,
}

/// Applies `rules` to `candidates` in level order 1 → 2 → 3.
///
/// Within a level, rules run in declaration order and a removal is attributed
/// to the first rule that rejects the candidate. Ranking rules sort stably by
/// ascending score (ties keep their incoming order) and truncate to their
/// `k`; several ranking rules compose sequentially, so the final size is the
/// minimum of their retentions. Levels listed in `integrated` are skipped —
/// the generator already enforced them.
pub fn apply_filters<P, C>(
    candidates: Vec<P>,
    rules: &[FilterRule<P, C>],
    integrated: IntegratedLevels,
    ctx: &C,
) -> FilterOutcome<P> {
    let mut outcome = FilterOutcome {
        survivors: candidates,
        removed_by_level: [0; 3],
        removed_by_rule: vec![0; rules.len()],
        last_removal: None,
    };

    for level in [FilterLevel::NoGo, FilterLevel::Feasibility] {
        if integrated.contains(level) {
            continue;
        }
        let active: Vec<usize> =
            (0..rules.len()).filter(|&i| rules[i].level() == level).collect();
        if active.is_empty() {
            continue;
        }
        let incoming = std::mem::take(&mut outcome.survivors);
        outcome.survivors.reserve(incoming.len());
        'candidate: for candidate in incoming {
            for &i in &active {
                if !rules[i].accepts(&candidate, ctx) {
                    outcome.removed_by_rule[i] += 1;
                    outcome.removed_by_level[level.slot()] += 1;
                    outcome.last_removal = Some(level);
                    continue 'candidate;
                }
            }
            outcome.survivors.push(candidate);
        }
    }

    for (i, rule) in rules.iter().enumerate() {
        let RuleKind::Ranking(score, _) = &rule.kind else { continue };
        if outcome.survivors.is_empty() {
            break;
        }
        // Stable sort: equal scores keep their incoming order.
        let mut scored: Vec<(f64, P)> = std::mem::take(&mut outcome.survivors)
            .into_iter()
            .map(|c| (score(&c, ctx), c))
            .collect();
        scored.sort_by(|a, b| a.0.total_cmp(&b.0));
        outcome.survivors = scored.into_iter().map(|(_, c)| c).collect();
        if let Some(k) = rule.truncates_at(outcome.survivors.len()) {
            let removed = (outcome.survivors.len() - k) as u64;
            outcome.survivors.truncate(k);
            outcome.removed_by_rule[i] += removed;
            outcome.removed_by_level[FilterLevel::Ranking.slot()] += removed;
            outcome.last_removal = Some(FilterLevel::Ranking);
        }
    }

    outcome
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn feasibility_removes_rejected_candidate() {
        let rules = vec![FilterRule::feasibility("not-x2", |c: &String, _: &()| c != "x2")];
        let out = apply_filters(names(&["x1", "x2", "x3", "x4", "x5"]), &rules, IntegratedLevels::NONE, &());
        assert_eq!(out.survivors, names(&["x1", "x3", "x4", "x5"]));
        assert_eq!(out.removed_by_level, [0, 1, 0]);
        assert_eq!(out.removed_by_rule, vec![1]);
        assert_eq!(out.last_removal, Some(FilterLevel::Feasibility));
    }

    #[test]
    fn ranking_keeps_ties_in_original_order() {
        // Scores 3,1,4,1,5 with k=2 keep the two 1-scored candidates, in
        // their original relative order.
        let scores = [3.0, 1.0, 4.0, 1.0, 5.0];
        let rules = vec![FilterRule::ranking(
            "score",
            move |c: &String, _: &()| scores[c.strip_prefix('x').unwrap().parse::<usize>().unwrap()],
            Keep::Top(2),
        )];
        let out = apply_filters(names(&["x0", "x1", "x2", "x3", "x4"]), &rules, IntegratedLevels::NONE, &());
        assert_eq!(out.survivors, names(&["x1", "x3"]));
        assert_eq!(out.removed_by_level, [0, 0, 3]);
    }

    #[test]
    fn no_go_can_empty_the_set() {
        let rules = vec![FilterRule::no_go("none-pass", |_: &String, _: &()| false)];
        let out = apply_filters(names(&["a", "b", "c", "d", "e"]), &rules, IntegratedLevels::NONE, &());
        assert!(out.survivors.is_empty());
        assert_eq!(out.removed_by_level, [5, 0, 0]);
        assert_eq!(out.last_removal, Some(FilterLevel::NoGo));
    }

    #[test]
    fn integrated_levels_are_skipped() {
        let rules = vec![FilterRule::feasibility("reject-all", |_: &String, _: &()| false)];
        let out = apply_filters(names(&["a"]), &rules, IntegratedLevels::FEASIBILITY, &());
        assert_eq!(out.survivors, names(&["a"]));
        assert_eq!(out.removed_by_level, [0, 0, 0]);
    }

    #[test]
    fn sequential_rankings_compose_to_min_k() {
        let rules = vec![
            FilterRule::ranking("by-value", |c: &i64, _: &()| *c as f64, Keep::Top(3)),
            FilterRule::ranking("by-distance-to-ten", |c: &i64, _: &()| (*c - 10).abs() as f64, Keep::Top(2)),
        ];
        let out = apply_filters(vec![9, 1, 7, 5, 3], &rules, IntegratedLevels::NONE, &());
        // First rule keeps {1,3,5}; second reorders by |c-10| → 5,3 kept.
        assert_eq!(out.survivors, vec![5, 3]);
        assert_eq!(out.removed_by_level, [0, 0, 3]);
        assert_eq!(out.removed_by_rule, vec![2, 1]);
    }

    #[test]
    fn keep_all_only_sorts() {
        let rules = vec![FilterRule::ranking("identity", |c: &i64, _: &()| *c as f64, Keep::All)];
        let out = apply_filters(vec![3, 1, 2], &rules, IntegratedLevels::NONE, &());
        assert_eq!(out.survivors, vec![1, 2, 3]);
        assert_eq!(out.removed_by_level, [0, 0, 0]);
    }

    #[test]
    fn levels_apply_in_order_regardless_of_declaration() {
        // Declared ranking-first, but the no-go still runs before it.
        let rules = vec![
            FilterRule::ranking("by-value", |c: &i64, _: &()| *c as f64, Keep::Top(1)),
            FilterRule::no_go("positive", |c: &i64, _: &()| *c > 0),
        ];
        let out = apply_filters(vec![-5, 2, 1], &rules, IntegratedLevels::NONE, &());
        assert_eq!(out.survivors, vec![1]);
        assert_eq!(out.removed_by_level, [1, 0, 1]);
    }

    #[test]
    fn counts_balance_with_survivors() {
        let rules = vec![
            FilterRule::no_go("even", |c: &i64, _: &()| c % 2 == 0),
            FilterRule::feasibility("small", |c: &i64, _: &()| *c < 80),
            FilterRule::ranking("value", |c: &i64, _: &()| *c as f64, Keep::Top(5)),
        ];
        let candidates: Vec<i64> = (0..100).collect();
        let out = apply_filters(candidates.clone(), &rules, IntegratedLevels::NONE, &());
        let removed: u64 = out.removed_by_level.iter().sum();
        assert_eq!(removed + out.survivors.len() as u64, candidates.len() as u64);
        assert_eq!(out.survivors, vec![0, 2, 4, 6, 8]);
    }
}
