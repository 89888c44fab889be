//! Pixel-coverage line precision and the endpoint match criterion.
//!
//! `LP_r` is the fraction of ground-truth line pixels covered by the
//! prediction raster dilated with a Euclidean disk of radius `r`: the
//! prediction is dilated, the ground truth is not, and both rasters are
//! 1-pixel Bresenham renderings of their segment lists.

use crate::error::{Error, Result};
use crate::geometry::LineSegment;
use crate::raster::{dilate_disk, rasterize_segment_into, BinaryMap};
use crate::scalar::Scalar;

/// Union raster of a segment list.
pub fn rasterize_segments<S: Scalar>(
    segments: &[LineSegment<S>],
    width: usize,
    height: usize,
) -> BinaryMap {
    let mut map = BinaryMap::new(width, height);
    for seg in segments {
        rasterize_segment_into(seg, &mut map);
    }
    map
}

/// Line precision on prepared rasters: |dilate(X, r) AND Y| / |Y|.
pub fn line_precision_rasters<S: Scalar>(
    pred: &BinaryMap,
    gt: &BinaryMap,
    r: u32,
) -> Result<S> {
    if pred.dimensions() != gt.dimensions() {
        return Err(Error::Contract(format!(
            "prediction raster is {}x{} but ground truth is {}x{}",
            pred.width(),
            pred.height(),
            gt.width(),
            gt.height()
        )));
    }
    let gt_count = gt.count_ones();
    if gt_count == 0 {
        return Err(Error::UndefinedMetric(
            "ground truth rasterizes to zero pixels".into(),
        ));
    }
    let dilated = dilate_disk(pred, r);
    let covered = dilated
        .as_bits()
        .iter()
        .zip(gt.as_bits())
        .filter(|(p, g)| **p && **g)
        .count();
    Ok(S::from_usize_lossy(covered) / S::from_usize_lossy(gt_count))
}

/// Line precision at radius `r` between two segment lists.
pub fn line_precision<S: Scalar>(
    pred: &[LineSegment<S>],
    gt: &[LineSegment<S>],
    width: usize,
    height: usize,
    r: u32,
) -> Result<S> {
    let x = rasterize_segments(pred, width, height);
    let y = rasterize_segments(gt, width, height);
    line_precision_rasters(&x, &y, r)
}

/// Endpoint true-positive criterion: the smaller (over both endpoint
/// pairings) sum of squared endpoint distances is at most `e`.
pub fn endpoint_match<S: Scalar>(pred: &LineSegment<S>, gt: &LineSegment<S>, e: S) -> bool {
    let d2 = |a: crate::geometry::Point2<S>, b: crate::geometry::Point2<S>| {
        let d = a.sub(b);
        d.dot(d)
    };
    let straight = d2(pred.p1, gt.p1) + d2(pred.p2, gt.p2);
    let swapped = d2(pred.p1, gt.p2) + d2(pred.p2, gt.p1);
    straight.min(swapped) <= e
}

/// Per-image segments keyed by an image id.
#[derive(Debug, Clone)]
pub struct ImageSegments<S> {
    pub id: String,
    pub width: usize,
    pub height: usize,
    pub segments: Vec<LineSegment<S>>,
}

/// Line-precision values for one image, ordered like the report radii.
#[derive(Debug, Clone)]
pub struct ImageLp<S> {
    pub id: String,
    pub lp: Vec<S>,
}

/// Evaluation over a prediction/ground-truth set.
#[derive(Debug, Clone)]
pub struct EvalReport<S> {
    pub radii: Vec<u32>,
    pub per_image: Vec<ImageLp<S>>,
    /// Unweighted mean over evaluated images, per radius.
    pub aggregate: Vec<S>,
    /// Images skipped because their ground truth rasterizes to nothing.
    pub skipped: Vec<String>,
}

impl<S: Scalar> EvalReport<S> {
    /// CSV rendering: header `image,LP_0,...`, one row per image, and a
    /// final AGGREGATE row.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("image");
        for r in &self.radii {
            out.push_str(&format!(",LP_{r}"));
        }
        out.push('\n');
        for row in &self.per_image {
            out.push_str(&row.id);
            for v in &row.lp {
                out.push_str(&format!(",{:.6}", v.to_f64_lossy()));
            }
            out.push('\n');
        }
        out.push_str("AGGREGATE");
        for v in &self.aggregate {
            out.push_str(&format!(",{:.6}", v.to_f64_lossy()));
        }
        out.push('\n');
        for id in &self.skipped {
            out.push_str(&format!("# skipped (empty ground truth): {id}\n"));
        }
        out
    }
}

/// Evaluates LP at every radius for matching prediction/ground-truth ids.
///
/// Ids must match exactly between the two sets; images whose ground truth
/// rasterizes to zero pixels are skipped and listed in the report.
pub fn evaluate_set<S: Scalar>(
    preds: &[ImageSegments<S>],
    gts: &[ImageSegments<S>],
    radii: &[u32],
) -> Result<EvalReport<S>> {
    let pred_ids: std::collections::BTreeSet<&str> =
        preds.iter().map(|p| p.id.as_str()).collect();
    let gt_ids: std::collections::BTreeSet<&str> = gts.iter().map(|g| g.id.as_str()).collect();
    if pred_ids != gt_ids {
        let missing_pred: Vec<_> = gt_ids.difference(&pred_ids).copied().collect();
        let missing_gt: Vec<_> = pred_ids.difference(&gt_ids).copied().collect();
        return Err(Error::Config(format!(
            "image id mismatch: missing predictions {missing_pred:?}, missing ground truth {missing_gt:?}"
        )));
    }

    let mut per_image = Vec::new();
    let mut skipped = Vec::new();
    let mut sums = vec![S::zero(); radii.len()];
    for gt in gts {
        let pred = preds
            .iter()
            .find(|p| p.id == gt.id)
            .expect("ids verified equal");
        if pred.width != gt.width || pred.height != gt.height {
            return Err(Error::Config(format!(
                "image {}: prediction raster {}x{} but ground truth {}x{}",
                gt.id, pred.width, pred.height, gt.width, gt.height
            )));
        }
        let x = rasterize_segments(&pred.segments, gt.width, gt.height);
        let y = rasterize_segments(&gt.segments, gt.width, gt.height);
        if y.count_ones() == 0 {
            skipped.push(gt.id.clone());
            continue;
        }
        let lp = radii
            .iter()
            .map(|r| line_precision_rasters::<S>(&x, &y, *r))
            .collect::<Result<Vec<_>>>()?;
        for (sum, v) in sums.iter_mut().zip(&lp) {
            *sum = *sum + *v;
        }
        per_image.push(ImageLp {
            id: gt.id.clone(),
            lp,
        });
    }
    let count = per_image.len();
    let aggregate = if count == 0 {
        vec![S::zero(); radii.len()]
    } else {
        sums.into_iter()
            .map(|s| s / S::from_usize_lossy(count))
            .collect()
    };
    Ok(EvalReport {
        radii: radii.to_vec(),
        per_image,
        aggregate,
        skipped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point2;

    fn seg(x1: f64, y1: f64, x2: f64, y2: f64) -> LineSegment<f64> {
        LineSegment::from_endpoints(Point2::new(x1, y1), Point2::new(x2, y2))
    }

    #[test]
    fn identical_sets_have_unit_precision_at_zero_radius() {
        let s = vec![seg(2.0, 3.0, 17.0, 11.0), seg(1.0, 18.0, 15.0, 2.0)];
        let lp: f64 = line_precision(&s, &s, 20, 20, 0).unwrap();
        assert_eq!(lp, 1.0);
    }

    #[test]
    fn empty_prediction_scores_zero() {
        let gt = vec![seg(0.0, 5.0, 9.0, 5.0)];
        let lp: f64 = line_precision(&[], &gt, 10, 10, 3).unwrap();
        assert_eq!(lp, 0.0);
    }

    #[test]
    fn lateral_offset_two_needs_radius_two() {
        let gt = vec![seg(0.0, 5.0, 9.0, 5.0)];
        let pred = vec![seg(0.0, 7.0, 9.0, 7.0)];
        let lp1: f64 = line_precision(&pred, &gt, 10, 10, 1).unwrap();
        let lp2: f64 = line_precision(&pred, &gt, 10, 10, 2).unwrap();
        assert_eq!(lp1, 0.0);
        assert_eq!(lp2, 1.0);
    }

    #[test]
    fn empty_ground_truth_is_undefined() {
        let pred = vec![seg(0.0, 5.0, 9.0, 5.0)];
        assert!(matches!(
            line_precision::<f64>(&pred, &[], 10, 10, 0),
            Err(Error::UndefinedMetric(_))
        ));
    }

    #[test]
    fn endpoint_match_examples() {
        let gt = seg(0.0, 0.0, 10.0, 0.0);
        assert!(endpoint_match(&gt, &gt, 0.0));
        let shifted = seg(1.0, 0.0, 11.0, 0.0);
        assert!(endpoint_match(&shifted, &gt, 2.0));
        assert!(!endpoint_match(&shifted, &gt, 1.9));
    }

    #[test]
    fn endpoint_match_is_pairing_symmetric() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(13);
        for _ in 0..50 {
            let a = seg(
                rng.gen_range(0.0..20.0),
                rng.gen_range(0.0..20.0),
                rng.gen_range(0.0..20.0),
                rng.gen_range(0.0..20.0),
            );
            let b = seg(
                rng.gen_range(0.0..20.0),
                rng.gen_range(0.0..20.0),
                rng.gen_range(0.0..20.0),
                rng.gen_range(0.0..20.0),
            );
            let b_swapped = LineSegment::from_endpoints(b.p2, b.p1);
            for e in [1.0, 10.0, 100.0] {
                assert_eq!(endpoint_match(&a, &b, e), endpoint_match(&a, &b_swapped, e));
            }
        }
    }

    fn image(id: &str, segments: Vec<LineSegment<f64>>) -> ImageSegments<f64> {
        ImageSegments {
            id: id.into(),
            width: 32,
            height: 32,
            segments,
        }
    }

    #[test]
    fn evaluate_matching_sets() {
        let gt = vec![image("a", vec![seg(0.0, 5.0, 20.0, 5.0)])];
        let report = evaluate_set(&gt, &gt, &[0, 1, 2]).unwrap();
        assert_eq!(report.aggregate, vec![1.0, 1.0, 1.0]);
        assert_eq!(report.per_image.len(), 1);
    }

    #[test]
    fn aggregate_is_mean_over_images() {
        let gts = vec![
            image("a", vec![seg(0.0, 5.0, 20.0, 5.0)]),
            image("b", vec![seg(0.0, 5.0, 20.0, 5.0)]),
        ];
        let preds = vec![
            image("a", vec![seg(0.0, 5.0, 20.0, 5.0)]),
            image("b", vec![seg(0.0, 25.0, 20.0, 25.0)]), // far away
        ];
        let report = evaluate_set(&preds, &gts, &[0]).unwrap();
        assert_eq!(report.aggregate, vec![0.5]);
    }

    #[test]
    fn empty_gt_images_are_skipped_and_listed() {
        let gts = vec![
            image("a", vec![seg(0.0, 5.0, 20.0, 5.0)]),
            image("b", vec![]),
        ];
        let preds = vec![
            image("a", vec![seg(0.0, 5.0, 20.0, 5.0)]),
            image("b", vec![seg(0.0, 1.0, 5.0, 1.0)]),
        ];
        let report = evaluate_set(&preds, &gts, &[0]).unwrap();
        assert_eq!(report.skipped, vec!["b".to_string()]);
        assert_eq!(report.aggregate, vec![1.0]);
    }

    #[test]
    fn id_mismatch_lists_difference() {
        let gts = vec![image("a", vec![seg(0.0, 5.0, 20.0, 5.0)])];
        let preds = vec![image("zz", vec![seg(0.0, 5.0, 20.0, 5.0)])];
        let err = evaluate_set(&preds, &gts, &[0]).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("a") && msg.contains("zz"), "{msg}");
    }

    #[test]
    fn csv_shape() {
        let gt = vec![image("a", vec![seg(0.0, 5.0, 20.0, 5.0)])];
        let report = evaluate_set(&gt, &gt, &[0, 1, 2, 3, 5, 10]).unwrap();
        let csv = report.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("image,LP_0,LP_1,LP_2,LP_3,LP_5,LP_10"));
        assert_eq!(
            lines.next(),
            Some("a,1.000000,1.000000,1.000000,1.000000,1.000000,1.000000")
        );
        assert!(lines.next().unwrap().starts_with("AGGREGATE,1.000000"));
    }

    #[test]
    fn subset_coverage_gives_unit_lp_zero() {
        // Prediction superset of ground truth pixels: LP_0 = 1.
        let gt = vec![seg(5.0, 5.0, 15.0, 5.0)];
        let pred = vec![seg(0.0, 5.0, 25.0, 5.0)];
        let lp: f64 = line_precision(&pred, &gt, 32, 32, 0).unwrap();
        assert_eq!(lp, 1.0);
    }
}
