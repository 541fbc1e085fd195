//! Rollups from enabler scores to categories, use cases, services and the
//! overall picture.
//!
//! Category values are means of member enabler scores. Use-case totals are
//! the mean of the *present* category means, never the flat mean over all
//! enablers, and absent categories are skipped rather than counted as zero.
//! Means over lists of floats sum a sorted copy so that the result is
//! bitwise independent of input order.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::catalog::Category;
use crate::round1;
use crate::scoring::EnablerScores;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AggregationError {
    #[error("nothing to aggregate")]
    Empty,
    #[error("every category is absent")]
    AllCategoriesAbsent,
    #[error("no considered use cases in service '{0}'")]
    NoConsideredUseCases(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Dimensions {
    pub readiness: f64,
    pub aspiration: f64,
    pub threshold: f64,
}

impl Dimensions {
    fn map(self, f: impl Fn(f64) -> f64) -> Dimensions {
        Dimensions {
            readiness: f(self.readiness),
            aspiration: f(self.aspiration),
            threshold: f(self.threshold),
        }
    }
}

/// Per-category means; `None` marks a category with no enablers.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CategoryScores {
    pub physical: Option<Dimensions>,
    pub operation: Option<Dimensions>,
    pub digital: Option<Dimensions>,
    pub connectivity: Option<Dimensions>,
    pub standard: Option<Dimensions>,
}

impl CategoryScores {
    pub fn get(&self, category: Category) -> Option<Dimensions> {
        match category {
            Category::Physical => self.physical,
            Category::Operation => self.operation,
            Category::Digital => self.digital,
            Category::Connectivity => self.connectivity,
            Category::Standard => self.standard,
        }
    }

    pub fn set(&mut self, category: Category, value: Option<Dimensions>) {
        let slot = match category {
            Category::Physical => &mut self.physical,
            Category::Operation => &mut self.operation,
            Category::Digital => &mut self.digital,
            Category::Connectivity => &mut self.connectivity,
            Category::Standard => &mut self.standard,
        };
        *slot = value;
    }

    /// Present categories in axis order.
    pub fn present(&self) -> impl Iterator<Item = (Category, Dimensions)> + '_ {
        Category::ALL
            .into_iter()
            .filter_map(move |c| self.get(c).map(|d| (c, d)))
    }

    pub fn is_empty(&self) -> bool {
        self.present().next().is_none()
    }

    fn rounded(&self) -> CategoryScores {
        let mut out = CategoryScores::default();
        for (c, d) in self.present() {
            out.set(c, Some(d.map(round1)));
        }
        out
    }

    /// Mean over present categories, summed in axis order.
    fn totals(&self) -> Option<Dimensions> {
        let mut sum = Dimensions {
            readiness: 0.0,
            aspiration: 0.0,
            threshold: 0.0,
        };
        let mut n = 0u32;
        for (_, d) in self.present() {
            sum.readiness += d.readiness;
            sum.aspiration += d.aspiration;
            sum.threshold += d.threshold;
            n += 1;
        }
        (n > 0).then(|| sum.map(|v| v / f64::from(n)))
    }
}

pub fn category_rollup(scores: &[EnablerScores]) -> Result<CategoryScores, AggregationError> {
    if scores.is_empty() {
        return Err(AggregationError::Empty);
    }
    // (readiness, aspiration, threshold, count) as exact integers
    let mut sums = [[0u32; 4]; 5];
    for s in scores {
        let acc = &mut sums[s.category.index()];
        acc[0] += u32::from(s.readiness_score);
        acc[1] += u32::from(s.aspiration_score);
        acc[2] += u32::from(s.threshold_score);
        acc[3] += 1;
    }
    let mut out = CategoryScores::default();
    for c in Category::ALL {
        let [r, a, t, n] = sums[c.index()];
        if n > 0 {
            let n = f64::from(n);
            out.set(
                c,
                Some(Dimensions {
                    readiness: f64::from(r) / n,
                    aspiration: f64::from(a) / n,
                    threshold: f64::from(t) / n,
                }),
            );
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UseCaseDisplay {
    pub total_readiness: f64,
    pub total_aspiration: f64,
    pub total_threshold: f64,
    pub categories: CategoryScores,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UseCaseScores {
    pub use_case_id: String,
    pub categories: CategoryScores,
    pub total_readiness: f64,
    pub total_aspiration: f64,
    pub total_threshold: f64,
    pub deployment_cost: u32,
    /// Same values rounded to one decimal.
    pub display: UseCaseDisplay,
}

pub fn use_case_rollup(
    use_case_id: &str,
    categories: CategoryScores,
    scores: &[EnablerScores],
) -> Result<UseCaseScores, AggregationError> {
    let totals = categories.totals().ok_or(AggregationError::AllCategoriesAbsent)?;
    let deployment_cost = scores.iter().map(|s| u32::from(s.cost_points)).sum();
    Ok(UseCaseScores {
        use_case_id: use_case_id.into(),
        display: UseCaseDisplay {
            total_readiness: round1(totals.readiness),
            total_aspiration: round1(totals.aspiration),
            total_threshold: round1(totals.threshold),
            categories: categories.rounded(),
        },
        categories,
        total_readiness: totals.readiness,
        total_aspiration: totals.aspiration,
        total_threshold: totals.threshold,
        deployment_cost,
    })
}

/// Readiness as a fraction of aspiration, clamped to [0, 1]. A use case
/// with nothing aspired is complete.
pub fn use_case_progress(scores: &UseCaseScores) -> f64 {
    if scores.total_aspiration <= 0.0 {
        return 1.0;
    }
    (scores.total_readiness / scores.total_aspiration).clamp(0.0, 1.0)
}

fn sorted_mean(values: impl IntoIterator<Item = f64>) -> Option<f64> {
    let mut values: Vec<f64> = values.into_iter().collect();
    if values.is_empty() {
        return None;
    }
    values.sort_by(f64::total_cmp);
    let n = values.len() as f64;
    Some(values.into_iter().sum::<f64>() / n)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UseCaseProgress {
    pub use_case_id: String,
    pub progress: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ServiceProgress {
    pub service_id: String,
    pub use_cases: Vec<UseCaseProgress>,
    pub progress: f64,
    pub display: f64,
}

/// Unweighted mean of the considered use cases' progress.
pub fn service_progress(
    service_id: &str,
    per_use_case: Vec<UseCaseProgress>,
) -> Result<ServiceProgress, AggregationError> {
    let progress = sorted_mean(per_use_case.iter().map(|u| u.progress))
        .ok_or_else(|| AggregationError::NoConsideredUseCases(service_id.into()))?;
    Ok(ServiceProgress {
        service_id: service_id.into(),
        use_cases: per_use_case,
        progress,
        display: round1(progress),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OverallDisplay {
    pub total_readiness: f64,
    pub total_aspiration: f64,
    pub gap: f64,
    pub categories: CategoryScores,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OverallScores {
    pub use_cases: Vec<String>,
    pub categories: CategoryScores,
    pub total_readiness: f64,
    pub total_aspiration: f64,
    /// `total_aspiration - total_readiness`.
    pub gap: f64,
    pub display: OverallDisplay,
}

/// Equal-weight aggregation over the considered use cases.
pub fn overall_rollup(use_cases: &[UseCaseScores]) -> Result<OverallScores, AggregationError> {
    if use_cases.is_empty() {
        return Err(AggregationError::Empty);
    }
    let mut categories = CategoryScores::default();
    for c in Category::ALL {
        let present: Vec<Dimensions> = use_cases.iter().filter_map(|u| u.categories.get(c)).collect();
        if present.is_empty() {
            continue;
        }
        let mean = |f: fn(&Dimensions) -> f64| sorted_mean(present.iter().map(f)).unwrap_or(0.0);
        categories.set(
            c,
            Some(Dimensions {
                readiness: mean(|d| d.readiness),
                aspiration: mean(|d| d.aspiration),
                threshold: mean(|d| d.threshold),
            }),
        );
    }
    let totals = categories.totals().ok_or(AggregationError::AllCategoriesAbsent)?;
    let gap = totals.aspiration - totals.readiness;
    let mut ids: Vec<String> = use_cases.iter().map(|u| u.use_case_id.clone()).collect();
    ids.sort();
    Ok(OverallScores {
        use_cases: ids,
        display: OverallDisplay {
            total_readiness: round1(totals.readiness),
            total_aspiration: round1(totals.aspiration),
            gap: round1(gap),
            categories: categories.rounded(),
        },
        categories,
        total_readiness: totals.readiness,
        total_aspiration: totals.aspiration,
        gap,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ImpactLevel {
    Low,
    Medium,
    High,
}

impl ImpactLevel {
    pub fn points(self) -> u8 {
        match self {
            ImpactLevel::Low => 1,
            ImpactLevel::Medium => 2,
            ImpactLevel::High => 3,
        }
    }
}

impl FromStr for ImpactLevel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "low" => Ok(ImpactLevel::Low),
            "medium" => Ok(ImpactLevel::Medium),
            "high" => Ok(ImpactLevel::High),
            _ => Err(alloc::format!("unknown impact level '{s}' (expected low, medium or high)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ImpactFactor {
    Cost,
    Safety,
    Efficiency,
    Environment,
    Inclusion,
}

impl ImpactFactor {
    pub const ALL: [ImpactFactor; 5] = [
        ImpactFactor::Cost,
        ImpactFactor::Safety,
        ImpactFactor::Efficiency,
        ImpactFactor::Environment,
        ImpactFactor::Inclusion,
    ];

    pub fn label(self) -> &'static str {
        match self {
            ImpactFactor::Cost => "Cost",
            ImpactFactor::Safety => "Safety",
            ImpactFactor::Efficiency => "Efficiency",
            ImpactFactor::Environment => "Environment",
            ImpactFactor::Inclusion => "Inclusion",
        }
    }
}

impl fmt::Display for ImpactFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Ordinal impact of deploying one use case.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImpactProfile {
    pub cost: ImpactLevel,
    pub safety: ImpactLevel,
    pub efficiency: ImpactLevel,
    pub environment: ImpactLevel,
    pub inclusion: ImpactLevel,
}

impl ImpactProfile {
    pub fn uniform(level: ImpactLevel) -> Self {
        Self {
            cost: level,
            safety: level,
            efficiency: level,
            environment: level,
            inclusion: level,
        }
    }

    pub fn get(&self, factor: ImpactFactor) -> ImpactLevel {
        match factor {
            ImpactFactor::Cost => self.cost,
            ImpactFactor::Safety => self.safety,
            ImpactFactor::Efficiency => self.efficiency,
            ImpactFactor::Environment => self.environment,
            ImpactFactor::Inclusion => self.inclusion,
        }
    }

    pub fn points(&self) -> [f64; 5] {
        ImpactFactor::ALL.map(|f| f64::from(self.get(f).points()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ImpactMeans {
    pub cost: f64,
    pub safety: f64,
    pub efficiency: f64,
    pub environment: f64,
    pub inclusion: f64,
}

impl ImpactMeans {
    pub fn values(&self) -> [f64; 5] {
        [self.cost, self.safety, self.efficiency, self.environment, self.inclusion]
    }
}

pub fn service_impact(profiles: &[ImpactProfile]) -> Result<ImpactMeans, AggregationError> {
    if profiles.is_empty() {
        return Err(AggregationError::Empty);
    }
    let n = profiles.len() as f64;
    let mean = |f: ImpactFactor| {
        let total: u32 = profiles.iter().map(|p| u32::from(p.get(f).points())).sum();
        f64::from(total) / n
    };
    Ok(ImpactMeans {
        cost: mean(ImpactFactor::Cost),
        safety: mean(ImpactFactor::Safety),
        efficiency: mean(ImpactFactor::Efficiency),
        environment: mean(ImpactFactor::Environment),
        inclusion: mean(ImpactFactor::Inclusion),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin::{builtin_croads_catalog, demo_assessments};
    use crate::scoring::{score_all, Importance};
    use alloc::vec;

    fn demo_scores() -> Vec<EnablerScores> {
        score_all(&demo_assessments(), &builtin_croads_catalog()).unwrap()
    }

    fn one(category: Category, r: u8, a: u8, t: u8, cost: u8) -> EnablerScores {
        EnablerScores {
            enabler_id: "e".into(),
            category,
            importance: Importance::High,
            readiness_score: r,
            aspiration_score: a,
            threshold_score: t,
            cost_points: cost,
        }
    }

    #[test]
    fn demo_category_rollup() {
        let c = category_rollup(&demo_scores()).unwrap();
        assert_eq!(c.connectivity.unwrap().readiness, 6.5);
        assert_eq!(c.digital.unwrap().readiness, 4.5);
        assert_eq!(c.standard.unwrap().threshold, 4.5);
        let op = c.operation.unwrap();
        assert_eq!((op.readiness, op.aspiration, op.threshold), (3.0, 9.0, 3.0));
    }

    #[test]
    fn single_enabler_leaves_others_absent() {
        let c = category_rollup(&[one(Category::Physical, 6, 9, 3, 1)]).unwrap();
        assert_eq!(c.physical.unwrap().readiness, 6.0);
        assert!(c.operation.is_none() && c.digital.is_none());
        assert!(c.connectivity.is_none() && c.standard.is_none());
        assert_eq!(category_rollup(&[]), Err(AggregationError::Empty));
    }

    #[test]
    fn demo_totals_and_cost() {
        let scores = demo_scores();
        let totals = use_case_rollup("RWW-RM", category_rollup(&scores).unwrap(), &scores).unwrap();
        assert!((totals.total_readiness - 5.8).abs() < 1e-12);
        assert!((totals.total_aspiration - 8.7).abs() < 1e-12);
        assert!((totals.total_threshold - 3.5).abs() < 1e-12);
        // 0+0+2+3+1+1+1+1+2
        assert_eq!(totals.deployment_cost, 11);
        assert_eq!(totals.display.total_aspiration, 8.7);
    }

    #[test]
    fn mean_of_means_differs_from_flat_mean() {
        let scores = demo_scores();
        let totals = use_case_rollup("x", category_rollup(&scores).unwrap(), &scores).unwrap();
        let flat: u32 = scores.iter().map(|s| u32::from(s.readiness_score)).sum();
        assert_eq!(flat, 55);
        assert!((totals.total_readiness - 55.0 / 9.0).abs() > 0.3);
    }

    #[test]
    fn single_category_totals() {
        let s = [one(Category::Digital, 6, 9, 3, 0)];
        let t = use_case_rollup("x", category_rollup(&s).unwrap(), &s).unwrap();
        assert_eq!((t.total_readiness, t.total_aspiration, t.total_threshold), (6.0, 9.0, 3.0));
        assert_eq!(
            use_case_rollup("x", CategoryScores::default(), &[]),
            Err(AggregationError::AllCategoriesAbsent)
        );
    }

    fn totals(r: f64, a: f64) -> UseCaseScores {
        UseCaseScores {
            use_case_id: "u".into(),
            categories: CategoryScores::default(),
            total_readiness: r,
            total_aspiration: a,
            total_threshold: 0.0,
            deployment_cost: 0,
            display: UseCaseDisplay {
                total_readiness: r,
                total_aspiration: a,
                total_threshold: 0.0,
                categories: CategoryScores::default(),
            },
        }
    }

    #[test]
    fn progress_rules() {
        assert!((use_case_progress(&totals(5.8, 8.7)) - 0.6667).abs() < 1e-4);
        assert_eq!(use_case_progress(&totals(4.0, 4.0)), 1.0);
        assert_eq!(use_case_progress(&totals(9.0, 6.0)), 1.0);
        assert_eq!(use_case_progress(&totals(0.0, 0.0)), 1.0);
    }

    fn up(id: &str, p: f64) -> UseCaseProgress {
        UseCaseProgress {
            use_case_id: id.into(),
            progress: p,
        }
    }

    #[test]
    fn service_progress_is_plain_mean() {
        let p = service_progress("RWW", vec![up("a", 2.0 / 3.0)]).unwrap();
        assert!((p.progress - 0.6667).abs() < 1e-4);
        let p = service_progress("RWW", vec![up("a", 1.0), up("b", 0.0), up("c", 0.5), up("d", 0.5)]).unwrap();
        assert_eq!(p.progress, 0.5);
        assert_eq!(
            service_progress("RWW", vec![]),
            Err(AggregationError::NoConsideredUseCases("RWW".into()))
        );
    }

    #[test]
    fn overall_for_single_use_case_is_identity() {
        let scores = demo_scores();
        let uc = use_case_rollup("RWW-RM", category_rollup(&scores).unwrap(), &scores).unwrap();
        let overall = overall_rollup(core::slice::from_ref(&uc)).unwrap();
        assert_eq!(overall.categories, uc.categories);
        assert_eq!(overall.total_readiness, uc.total_readiness);
        assert!((overall.gap - 2.9).abs() < 1e-9);

        let twice = overall_rollup(&[uc.clone(), uc.clone()]).unwrap();
        assert_eq!(twice.categories, uc.categories);
        assert_eq!(overall_rollup(&[]), Err(AggregationError::Empty));
    }

    #[test]
    fn impact_means() {
        use ImpactLevel::*;
        let low = ImpactProfile::uniform(Low);
        assert_eq!(service_impact(&[low]).unwrap().values(), [1.0; 5]);
        let a = ImpactProfile { cost: Low, safety: High, efficiency: Medium, environment: Medium, inclusion: Low };
        let b = ImpactProfile { cost: High, ..a };
        assert_eq!(service_impact(&[a, b]).unwrap().values(), [2.0, 3.0, 2.0, 2.0, 1.0]);
        assert_eq!(service_impact(&[a]).unwrap().values(), a.points());
        assert_eq!(service_impact(&[]), Err(AggregationError::Empty));
    }
}
