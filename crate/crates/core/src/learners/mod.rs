//! Structure learners: grow-shrink, GSMN*, GSIMN and GSIMN-FCH.

mod gs;
mod gsmn;
mod orders;

pub use gs::{gs_blanket, gsmn_abstract};
pub use gsmn::{
    promote_exam_order, promote_grow_order, run_algorithm, run_gsimn, run_gsimn_fch, run_gsmn_star, Algorithm,
    RunResult,
};
pub use orders::{init_orders, orders_from_p_values, ExamOrder, GrowOrder, PValueMatrix};
