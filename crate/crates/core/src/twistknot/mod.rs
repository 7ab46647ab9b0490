//! Congruence covers `Γ_0` of twist-knot orbifolds through epimorphisms onto `PSL_2(F_q)`.

pub mod cache;
pub mod epi;
pub mod orbifold;
pub mod rep;
pub mod survey;

pub use epi::{
    class_field, cover_betti, cover_betti_at, enumerate_epimorphisms, right_action_images, psl2_order, CoverRecord, EpiClass, EpiOptions, FieldData, CROSS_CHECK_PRIME,
    DEFAULT_PROXY_PRIME,
};
pub use orbifold::{twist_presentation, OrbifoldSpec};
pub use rep::{build_rep, conjugate_to_base_field, RepCandidate, Rejection};
pub use cache::{cache_resume, survey_cached, CacheLine, ResultsCache, SurveyPlan, CACHE_DIR_ENV, CACHE_SCHEMA};
pub use survey::{survey, survey_norms, survey_task, ClassRecord, NormSummary, SurveyOptions, SurveyReport, SURVEY_CSV_HEADER};
