use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geom::metric::dist_to_line;
use crate::vec3::Vec3;

use super::model::PointLineConfiguration;

/// `d(X) = min_{i≠j} d(p_i, ℓ_j)`.
pub fn min_config_distance(x: &PointLineConfiguration) -> Result<f64> {
    min_config_distance_witness(x).map(|(v, _, _)| v)
}

/// `d(X)` together with a minimising `(i, j)`: `d(p_i, ℓ_j) = d(X)`.
///
/// Points are bucketed on a uniform grid; for each line the cells are visited
/// in order of their lower distance bound and the scan stops once that bound
/// reaches the current minimum.
pub fn min_config_distance_witness(x: &PointLineConfiguration) -> Result<(f64, usize, usize)> {
    let n = x.len();
    if n < 2 {
        return Err(Error::TooFewItems { needed: 2, got: n });
    }
    let d = x.dim().get();
    let g = ((n as f64 / 16.0).powf(1.0 / d as f64).round() as usize).clamp(1, 64);
    let cells_per_axis = [g, g, if d == 3 { g } else { 1 }];
    let ncell = cells_per_axis.iter().product::<usize>();
    let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); ncell];
    let pts: Vec<Vec3> = x.pairs().iter().map(|p| p.point().vec()).collect();
    for (i, p) in pts.iter().enumerate() {
        let mut id = 0;
        for k in (0..d).rev() {
            let c = ((p[k] * g as f64).floor() as isize).clamp(0, g as isize - 1) as usize;
            id = id * g + c;
        }
        buckets[id].push(i);
    }
    let h = 1.0 / g as f64;
    let rad = 0.5 * h * (d as f64).sqrt() + 1e-12;
    let cells: Vec<(Vec3, &[usize])> = (0..ncell)
        .filter(|&id| !buckets[id].is_empty())
        .map(|id| {
            let mut c = [0.0; 3];
            let mut r = id;
            for ck in c.iter_mut().take(d) {
                *ck = ((r % g) as f64 + 0.5) * h;
                r /= g;
            }
            (Vec3(c), buckets[id].as_slice())
        })
        .collect();
    let lines = x.lines();

    let best = (0..n)
        .into_par_iter()
        .map(|j| {
            let l = &lines[j];
            let mut order: Vec<(f64, usize)> = cells
                .iter()
                .enumerate()
                .map(|(ci, (c, _))| (dist_to_line(*c, l) - rad, ci))
                .collect();
            order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            let mut best = (f64::INFINITY, usize::MAX);
            for (lb, ci) in order {
                if lb >= best.0 {
                    break;
                }
                for &i in cells[ci].1 {
                    if i == j {
                        continue;
                    }
                    let v = dist_to_line(pts[i], l);
                    if v < best.0 || (v == best.0 && i < best.1) {
                        best = (v, i);
                    }
                }
            }
            (best.0, best.1, j)
        })
        .reduce(
            || (f64::INFINITY, usize::MAX, usize::MAX),
            |a, b| if (b.0, b.2, b.1) < (a.0, a.2, a.1) { b } else { a },
        );
    Ok(best)
}

/// Exhaustive double loop; the oracle for [`min_config_distance`].
pub fn naive_min_config_distance(x: &PointLineConfiguration) -> Result<f64> {
    let n = x.len();
    if n < 2 {
        return Err(Error::TooFewItems { needed: 2, got: n });
    }
    let mut best = f64::INFINITY;
    for (i, a) in x.pairs().iter().enumerate() {
        for (j, b) in x.pairs().iter().enumerate() {
            if i != j {
                best = best.min(dist_to_line(a.point().vec(), b.line()));
            }
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::PointLinePair;
    use crate::geom::{Dim, Point};
    use proptest::prelude::*;

    fn vertical_pair(x: f64, y: f64) -> PointLinePair {
        PointLinePair::from_dir(Point::xyz(x, y, 0.0), Vec3::new(0.0, 0.0, 1.0)).unwrap()
    }

    #[test]
    fn parallel_offset_and_shared_line() {
        let x = PointLineConfiguration::new(
            Dim::Three,
            vec![vertical_pair(0.2, 0.5), vertical_pair(0.45, 0.5)],
        )
        .unwrap();
        assert!((min_config_distance(&x).unwrap() - 0.25).abs() < 1e-15);
        let l = Vec3::new(1.0, 0.0, 0.0);
        let shared = PointLineConfiguration::new(
            Dim::Three,
            vec![
                PointLinePair::from_dir(Point::xyz(0.1, 0.5, 0.5), l).unwrap(),
                PointLinePair::from_dir(Point::xyz(0.7, 0.5, 0.5), l).unwrap(),
                vertical_pair(0.9, 0.9),
            ],
        )
        .unwrap();
        assert_eq!(min_config_distance(&shared).unwrap(), 0.0);
        let one = PointLineConfiguration::new(Dim::Three, vec![vertical_pair(0.1, 0.1)]).unwrap();
        assert!(matches!(min_config_distance(&one), Err(Error::TooFewItems { .. })));
    }

    fn arb_config(dim: usize) -> impl Strategy<Value = PointLineConfiguration> {
        prop::collection::vec(
            (
                prop::array::uniform3(0.0f64..1.0),
                prop::array::uniform3(-1.0f64..1.0),
            ),
            2..120,
        )
        .prop_filter_map("degenerate", move |raw| {
            let dimv = Dim::from_usize(dim).unwrap();
            let pairs: Option<Vec<_>> = raw
                .into_iter()
                .map(|(p, v)| {
                    let (p, v) = if dim == 2 {
                        (Point::xy(p[0], p[1]), Vec3::new(v[0], v[1], 0.0))
                    } else {
                        (Point::xyz(p[0], p[1], p[2]), Vec3(v))
                    };
                    PointLinePair::from_dir(p, v).ok()
                })
                .collect();
            PointLineConfiguration::new(dimv, pairs?).ok()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn grid_pruning_is_exact_3d(x in arb_config(3)) {
            let (v, i, j) = min_config_distance_witness(&x).unwrap();
            prop_assert_eq!(v, naive_min_config_distance(&x).unwrap());
            prop_assert_ne!(i, j);
            prop_assert_eq!(dist_to_line(x.pairs()[i].point().vec(), x.pairs()[j].line()), v);
        }

        #[test]
        fn grid_pruning_is_exact_2d(x in arb_config(2)) {
            prop_assert_eq!(min_config_distance(&x).unwrap(), naive_min_config_distance(&x).unwrap());
        }
    }
}
