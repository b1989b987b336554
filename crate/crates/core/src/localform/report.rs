use serde::Serialize;

use super::LocalReduction;
use crate::connection::Theta;
use crate::exactalg::{format_rational, Rational};

/// `{"point", "theta_tail", "xi", "residual_order"}`.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct ReductionReport {
    pub point: usize,
    pub theta_tail: serde_json::Value,
    pub xi: Vec<[[String; 2]; 2]>,
    pub residual_order: i64,
}

fn strings(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

impl ReductionReport {
    pub fn new(red: &LocalReduction<Rational>) -> Self {
        let theta_tail = match red.theta_tail() {
            Theta::Pair { plus, minus } => serde_json::json!({ "plus": strings(&plus), "minus": strings(&minus) }),
            Theta::Ramified(v) => serde_json::json!(strings(&v)),
        };
        let xi = (0..=red.xi.trunc())
            .map(|k| {
                let m = red.xi.coeff(k).expect("within truncation");
                let f = |i: usize, j: usize| format_rational(&m.get(i, j));
                [[f(0, 0), f(0, 1)], [f(1, 0), f(1, 1)]]
            })
            .collect();
        ReductionReport { point: red.point, theta_tail, xi, residual_order: red.residual_order }
    }
}
