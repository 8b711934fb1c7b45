//! Benchmark fixtures: one instance per problem class with an interior dual point.

use lpnorm::{default_dual_start, instances, DualPoint, ProblemInstance};

pub struct Fixture {
    pub name: &'static str,
    pub problem: ProblemInstance,
    pub lambda: DualPoint,
}

pub fn fixtures() -> Vec<Fixture> {
    let named = [
        ("lp_2x2", instances::lp_2x2()),
        ("conic_2x2", instances::conic_2x2()),
        ("qp_2d", instances::qp_2d()),
        ("log_monomial_2d", instances::log_monomial_2d()),
    ];
    named
        .into_iter()
        .map(|(name, problem)| {
            let lambda = default_dual_start(&problem).expect("fixtures have interior dual points");
            Fixture {
                name,
                problem,
                lambda,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    #[test]
    fn fixtures_are_interior() {
        for f in super::fixtures() {
            assert!(f.problem.in_dual_domain(&f.lambda), "{}", f.name);
        }
    }
}
