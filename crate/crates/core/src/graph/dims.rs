use serde::Serialize;

use crate::word::FreeFactorSystem;

/// Vertex and edge counts of a maximal graph and the resulting dimensions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DimensionReport {
    #[serde(rename = "V")]
    pub v_max: i64,
    #[serde(rename = "E")]
    pub e_max: i64,
    pub dim_cv: i64,
    pub dim_spine: i64,
    pub s_param: i64,
}

pub fn dimension_report(sys: &FreeFactorSystem) -> DimensionReport {
    let n = sys.rank() as i64;
    let k = sys.k() as i64;
    let sum_s = sys.sum_s() as i64;
    let v_max = 2 * n + 2 * k - 2 - 2 * sum_s;
    let e_max = 3 * n + 2 * k - 3 - 3 * sum_s;
    let s_param = k.max(1);
    DimensionReport {
        v_max,
        e_max,
        dim_cv: e_max - 1,
        dim_spine: v_max - s_param,
        s_param,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(n: usize, s: &[usize]) -> DimensionReport {
        dimension_report(&FreeFactorSystem::standard(n, s).unwrap())
    }

    #[test]
    fn worked_values() {
        let r = report(2, &[1]);
        assert_eq!((r.v_max, r.e_max, r.dim_cv, r.dim_spine), (2, 2, 1, 1));
        assert_eq!(report(2, &[]).dim_cv, 2);
        let r = report(3, &[1]);
        assert_eq!((r.v_max, r.e_max, r.dim_cv, r.dim_spine), (4, 5, 4, 3));
    }

    #[test]
    fn classical_case_matches_outer_space() {
        for n in 2..6 {
            let r = report(n, &[]);
            assert_eq!(r.dim_cv, 3 * n as i64 - 4);
            assert_eq!(r.v_max, 2 * n as i64 - 2);
        }
    }
}
