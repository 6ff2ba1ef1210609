mod support;

use lsbert_core::evaluation::{eval_pipeline, eval_sg, PipelineReport, SgReport};
use support::*;

#[test]
fn generation_fixture_matches_hand_computation() {
    let scores: Vec<_> = SG_FIXTURE.iter().map(|(g, gold)| eval_sg(g, gold)).collect();
    let report = SgReport::from_instances(&scores);
    assert_eq!(report.instances, 10);
    assert!((report.precision - SG_FIXTURE_PRECISION).abs() < 1e-12);
    assert!((report.recall - SG_FIXTURE_RECALL).abs() < 1e-12);
    let p = SG_FIXTURE_PRECISION;
    let r = SG_FIXTURE_RECALL;
    assert!((report.f1 - 2.0 * p * r / (p + r)).abs() < 1e-12);
}

#[test]
fn pipeline_fixture_matches_hand_computation() {
    let hits: Vec<_> = PIPELINE_FIXTURE
        .iter()
        .map(|(rep, orig, gold)| eval_pipeline(rep, orig, gold))
        .collect();
    let changed = PIPELINE_FIXTURE
        .iter()
        .filter(|(rep, orig, _)| !rep.eq_ignore_ascii_case(orig))
        .count();
    let report = PipelineReport::from_hits(&hits, changed);
    assert!((report.precision - PIPELINE_FIXTURE_PRECISION).abs() < 1e-12);
    assert!((report.accuracy - PIPELINE_FIXTURE_ACCURACY).abs() < 1e-12);
    assert!((report.changed - 0.7).abs() < 1e-12);
}

#[test]
fn sari_identity_against_oracle() {
    let s = "the cat sat on the mat";
    let got = lsbert_core::evaluation::sari(s, s, &[s]);
    assert!((got - sari_oracle(s, s, &[s])).abs() < 1e-9);
    let c = lsbert_core::evaluation::sari_components(s, s, &[s]);
    assert_eq!(c.keep_score(), 1.0);
}

#[test]
fn sari_fixed_cases_against_oracle() {
    let cases: [(&str, &str, &[&str]); 4] = [
        ("a b c d", "a x d", &["a x c", "a b", "y b c d"]),
        ("about 95 species are currently accepted", "about 95 species are now accepted", &[
            "about 95 species are currently known",
            "about 95 species are now accepted",
            "95 species are now accepted",
        ]),
        ("x x x y", "x y", &["x x", "y"]),
        ("", "a", &["a"]),
    ];
    for (src, out, refs) in cases {
        let got = lsbert_core::evaluation::sari(src, out, refs);
        let want = sari_oracle(src, out, refs);
        assert!((got - want).abs() < 1e-9, "{src:?} -> {out:?}: {got} vs {want}");
    }
}
