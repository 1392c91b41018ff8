//! CSV emission for the characterization tables.
//!
//! One file per figure/table analog, with fixed names and columns:
//!
//! | file | columns |
//! |------|---------|
//! | `fig3_monthly_ratio.csv` | `month,total_questions,deleted_questions,ratio` |
//! | `fig4_cumulative.csv` | `month,deleted_questions,cumulative_deleted` |
//! | `fig5_vote_latency.csv` | `percentile,latency_seconds,latency_days` |
//! | `table6_vote_histogram.csv` | `votes,questions,fraction` |
//! | `fig7_initiator.csv` | `initiator,questions,fraction` |
//! | `fig8_comparisons.csv` | `attribute,initiator,percentile,value` |
//! | `fig9_quality.csv` | `class,indicator,value` |
//! | `fig10_tag_regions.csv` | `region,tag_count` |
//! | `table8_edits.csv` | `partition,metric,questions,fraction` |
//! | `fig13_undelete_latency.csv` | `initiator,percentile,latency_seconds` |
//!
//! Undefined values (a ratio over an empty month, a conditional fraction
//! with an empty denominator) are emitted as empty fields. A supplementary
//! `tag_frequencies.csv` (`class,rank,tag,count`) carries the top-k tag
//! tables that replace the word-cloud figures. Files are written
//! atomically; identical inputs produce byte-identical files.

use std::path::{Path, PathBuf};

use crate::snapshot::InitiatorPartition;
use crate::util::write_atomic;

use super::distribution::LatencyDistribution;
use super::edits::{CloseReason, PartitionEditStats};
use super::initiator::ComparisonReport;
use super::quality::QualityIndicators;
use super::tags::TagAlgebraReport;
use super::temporal::TimeSeriesRow;
use super::undelete::UndeleteReport;
use super::votes::{VoteHistogram, VoteLatencyReport};

pub const FIG3_FILE: &str = "fig3_monthly_ratio.csv";
pub const FIG4_FILE: &str = "fig4_cumulative.csv";
pub const FIG5_FILE: &str = "fig5_vote_latency.csv";
pub const TABLE6_FILE: &str = "table6_vote_histogram.csv";
pub const FIG7_FILE: &str = "fig7_initiator.csv";
pub const FIG8_FILE: &str = "fig8_comparisons.csv";
pub const FIG9_FILE: &str = "fig9_quality.csv";
pub const FIG10_FILE: &str = "fig10_tag_regions.csv";
pub const TABLE8_FILE: &str = "table8_edits.csv";
pub const FIG13_FILE: &str = "fig13_undelete_latency.csv";
pub const TAG_FREQUENCIES_FILE: &str = "tag_frequencies.csv";

/// The ten report files every characterization run emits.
pub const REPORT_FILES: [&str; 10] = [
    FIG3_FILE,
    FIG4_FILE,
    FIG5_FILE,
    TABLE6_FILE,
    FIG7_FILE,
    FIG8_FILE,
    FIG9_FILE,
    FIG10_FILE,
    TABLE8_FILE,
    FIG13_FILE,
];

/// Everything cmd-characterize computes, ready for serialization.
#[derive(Debug, Clone)]
pub struct CharacterizationReports {
    pub monthly: Vec<TimeSeriesRow>,
    pub vote_latency: VoteLatencyReport,
    pub vote_histogram: VoteHistogram,
    pub partition: InitiatorPartition,
    pub comparisons: ComparisonReport,
    /// Per-class quality indicators, e.g. `[("deleted", ..), ("closed", ..)]`.
    pub quality: Vec<(String, QualityIndicators)>,
    pub tags: TagAlgebraReport,
    pub edits: Vec<PartitionEditStats>,
    pub undelete: UndeleteReport,
}

/// Writes all report files into `dir`, returning the files written.
pub fn write_reports(
    dir: &Path,
    reports: &CharacterizationReports,
) -> std::io::Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let mut emit = |name: &str, content: String| -> std::io::Result<()> {
        let path = dir.join(name);
        write_atomic(&path, content.as_bytes())?;
        written.push(path);
        Ok(())
    };

    emit(FIG3_FILE, fig3(&reports.monthly))?;
    emit(FIG4_FILE, fig4(&reports.monthly))?;
    emit(FIG5_FILE, fig5(&reports.vote_latency))?;
    emit(TABLE6_FILE, table6(&reports.vote_histogram))?;
    emit(FIG7_FILE, fig7(&reports.partition))?;
    emit(FIG8_FILE, fig8(&reports.comparisons))?;
    emit(FIG9_FILE, fig9(&reports.quality))?;
    emit(FIG10_FILE, fig10(&reports.tags))?;
    emit(TABLE8_FILE, table8(&reports.edits))?;
    emit(FIG13_FILE, fig13(&reports.undelete))?;
    emit(TAG_FREQUENCIES_FILE, tag_frequencies(&reports.tags))?;
    Ok(written)
}

fn csv_line(fields: &[String]) -> String {
    let quoted: Vec<String> = fields
        .iter()
        .map(|f| {
            if f.contains([',', '"', '\n']) {
                format!("\"{}\"", f.replace('"', "\"\""))
            } else {
                f.clone()
            }
        })
        .collect();
    quoted.join(",")
}

fn table(header: &[&str], rows: Vec<Vec<String>>) -> String {
    let mut out = String::new();
    out.push_str(&csv_line(
        &header.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
    ));
    out.push('\n');
    for row in rows {
        out.push_str(&csv_line(&row));
        out.push('\n');
    }
    out
}

fn fig3(monthly: &[TimeSeriesRow]) -> String {
    table(
        &["month", "total_questions", "deleted_questions", "ratio"],
        monthly
            .iter()
            .map(|r| {
                vec![
                    r.month.to_string(),
                    r.denominator.to_string(),
                    r.numerator.to_string(),
                    r.ratio().map(|v| v.to_string()).unwrap_or_default(),
                ]
            })
            .collect(),
    )
}

fn fig4(monthly: &[TimeSeriesRow]) -> String {
    let cumulative = super::temporal::cumulative_deleted(monthly);
    table(
        &["month", "deleted_questions", "cumulative_deleted"],
        monthly
            .iter()
            .zip(cumulative)
            .map(|(r, (_, total))| {
                vec![
                    r.month.to_string(),
                    r.numerator.to_string(),
                    total.to_string(),
                ]
            })
            .collect(),
    )
}

fn percentile_rows(dist: &LatencyDistribution) -> Vec<(u32, f64)> {
    if dist.is_empty() {
        return Vec::new();
    }
    (0..=100)
        .map(|p| (p, dist.percentile(p as f64).expect("non-empty")))
        .collect()
}

fn fig5(report: &VoteLatencyReport) -> String {
    table(
        &["percentile", "latency_seconds", "latency_days"],
        percentile_rows(&report.distribution)
            .into_iter()
            .map(|(p, secs)| {
                vec![
                    p.to_string(),
                    secs.to_string(),
                    (secs / 86_400.0).to_string(),
                ]
            })
            .collect(),
    )
}

fn table6(hist: &VoteHistogram) -> String {
    table(
        &["votes", "questions", "fraction"],
        hist.buckets
            .iter()
            .map(|b| {
                vec![
                    b.label(),
                    b.questions.to_string(),
                    b.fraction.to_string(),
                ]
            })
            .collect(),
    )
}

fn fig7(partition: &InitiatorPartition) -> String {
    let total = partition.total() as f64;
    let rows = [
        ("author", partition.author.len()),
        ("moderator", partition.moderator.len()),
        ("unknown", partition.unknown.len()),
    ];
    table(
        &["initiator", "questions", "fraction"],
        rows.iter()
            .map(|(name, n)| {
                let fraction = if total == 0.0 { 0.0 } else { *n as f64 / total };
                vec![name.to_string(), n.to_string(), fraction.to_string()]
            })
            .collect(),
    )
}

fn fig8(report: &ComparisonReport) -> String {
    let mut rows = Vec::new();
    for attr in &report.attributes {
        for (initiator, dist) in [("author", &attr.author), ("moderator", &attr.moderator)] {
            if dist.is_empty() {
                continue;
            }
            for p in 0..=100u32 {
                let value = dist.percentile(p as f64).expect("non-empty");
                rows.push(vec![
                    attr.attribute.to_string(),
                    initiator.to_string(),
                    p.to_string(),
                    value.to_string(),
                ]);
            }
        }
    }
    table(&["attribute", "initiator", "percentile", "value"], rows)
}

fn fig9(quality: &[(String, QualityIndicators)]) -> String {
    let mut rows = Vec::new();
    for (class, q) in quality {
        let some = |v: f64| Some(v);
        let indicators: [(&str, Option<f64>); 10] = [
            ("qz", some(q.qz)),
            ("qgz", some(q.qgz)),
            ("pa", some(q.pa)),
            ("paa", some(q.paa)),
            ("pac", q.pac),
            ("cz", q.cz),
            ("favorited", some(q.favorited)),
            ("viewed", some(q.viewed)),
            ("with_code", some(q.with_code)),
            ("mean_body_chars", some(q.mean_body_chars)),
        ];
        for (name, value) in indicators {
            rows.push(vec![
                class.clone(),
                name.to_string(),
                value.map(|v| v.to_string()).unwrap_or_default(),
            ]);
        }
    }
    table(&["class", "indicator", "value"], rows)
}

fn fig10(report: &TagAlgebraReport) -> String {
    table(
        &["region", "tag_count"],
        report
            .regions
            .rows()
            .iter()
            .map(|(name, count)| vec![name.to_string(), count.to_string()])
            .collect(),
    )
}

fn table8(stats: &[PartitionEditStats]) -> String {
    let mut rows = Vec::new();
    for s in stats {
        let over_questions = |count: u64| {
            if s.questions == 0 {
                String::new()
            } else {
                (count as f64 / s.questions as f64).to_string()
            }
        };
        let base: [(&str, u64); 6] = [
            ("edited_any", s.edited_any),
            ("edit_title", s.edit_title),
            ("edit_body", s.edit_body),
            ("edit_tags", s.edit_tags),
            ("suggested_edit", s.suggested_edit),
            ("closed_before_deletion", s.closed_before_deletion),
        ];
        for (metric, count) in base {
            rows.push(vec![
                s.partition.to_string(),
                metric.to_string(),
                count.to_string(),
                over_questions(count),
            ]);
        }
        // Close reasons are fractions over the closed population.
        let closed = s.closed_before_deletion;
        for reason in CloseReason::ALL {
            let count = s.close_reasons.get(reason);
            let fraction = if closed == 0 {
                String::new()
            } else {
                (count as f64 / closed as f64).to_string()
            };
            rows.push(vec![
                s.partition.to_string(),
                format!("close_{}", reason.as_str()),
                count.to_string(),
                fraction,
            ]);
        }
    }
    table(&["partition", "metric", "questions", "fraction"], rows)
}

fn fig13(report: &UndeleteReport) -> String {
    let mut rows = Vec::new();
    for (initiator, dist) in [
        ("author", &report.author),
        ("moderator", &report.moderator),
        ("unknown", &report.unknown),
    ] {
        for (p, secs) in percentile_rows(dist) {
            rows.push(vec![
                initiator.to_string(),
                p.to_string(),
                secs.to_string(),
            ]);
        }
    }
    table(&["initiator", "percentile", "latency_seconds"], rows)
}

fn tag_frequencies(report: &TagAlgebraReport) -> String {
    let mut rows = Vec::new();
    let classes: [(&str, &[(String, u64)]); 4] = [
        ("regular", &report.top_regular),
        ("closed", &report.top_closed),
        ("deleted", &report.top_deleted),
        ("deleted_exclusive", &report.exclusive_deleted),
    ];
    for (class, tags) in classes {
        for (rank, (tag, count)) in tags.iter().enumerate() {
            rows.push(vec![
                class.to_string(),
                (rank + 1).to_string(),
                tag.clone(),
                count.to_string(),
            ]);
        }
    }
    table(&["class", "rank", "tag", "count"], rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characterize::{Month, SampleDistribution};
    use crate::snapshot::DeletedQuestionSet;

    fn sample_reports() -> CharacterizationReports {
        let monthly = vec![
            TimeSeriesRow {
                month: Month { year: 2011, month: 1 },
                numerator: 2,
                denominator: 10,
            },
            TimeSeriesRow {
                month: Month { year: 2011, month: 2 },
                numerator: 0,
                denominator: 0,
            },
        ];
        let deleted = DeletedQuestionSet::from_parts([(1u64, "E".to_string())], 0);
        let partition = crate::snapshot::join_initiators(&deleted, []);
        CharacterizationReports {
            monthly,
            vote_latency: VoteLatencyReport {
                distribution: LatencyDistribution::from_seconds(vec![0.0, 86_400.0]),
                questions_with_votes: 2,
                questions_without_votes: 0,
                negative_excluded: 0,
            },
            vote_histogram: super::super::votes::VoteHistogram {
                buckets: vec![],
                total: 0,
            },
            partition,
            comparisons: ComparisonReport {
                attributes: vec![super::super::initiator::AttributeDistributions {
                    attribute: "question_score",
                    author: SampleDistribution::new(vec![1.0]),
                    moderator: SampleDistribution::new(vec![]),
                }],
                missing_deletion_time: 0,
            },
            quality: vec![(
                "deleted".to_string(),
                QualityIndicators {
                    question_count: 1,
                    qz: 1.0,
                    qgz: 0.0,
                    pa: 0.0,
                    paa: 0.0,
                    pac: None,
                    cz: None,
                    favorited: 0.0,
                    viewed: 0.0,
                    with_code: 0.0,
                    mean_body_chars: 2.0,
                },
            )],
            tags: TagAlgebraReport::default(),
            edits: vec![PartitionEditStats {
                partition: "all",
                questions: 1,
                ..Default::default()
            }],
            undelete: UndeleteReport::default(),
        }
    }

    #[test]
    fn writes_all_ten_files_plus_supplement() {
        let dir = tempfile::tempdir().unwrap();
        let written = write_reports(dir.path(), &sample_reports()).unwrap();
        assert_eq!(written.len(), 11);
        for name in REPORT_FILES {
            assert!(dir.path().join(name).exists(), "{name} missing");
        }
        assert!(dir.path().join(TAG_FREQUENCIES_FILE).exists());
    }

    #[test]
    fn undefined_ratio_is_empty_field() {
        let dir = tempfile::tempdir().unwrap();
        write_reports(dir.path(), &sample_reports()).unwrap();
        let fig3 = std::fs::read_to_string(dir.path().join(FIG3_FILE)).unwrap();
        let lines: Vec<&str> = fig3.lines().collect();
        assert_eq!(lines[0], "month,total_questions,deleted_questions,ratio");
        assert_eq!(lines[1], "2011-01,10,2,0.2");
        assert_eq!(lines[2], "2011-02,0,0,");
    }

    #[test]
    fn rewrite_is_byte_identical() {
        let dir = tempfile::tempdir().unwrap();
        let reports = sample_reports();
        write_reports(dir.path(), &reports).unwrap();
        let first = std::fs::read(dir.path().join(FIG8_FILE)).unwrap();
        write_reports(dir.path(), &reports).unwrap();
        let second = std::fs::read(dir.path().join(FIG8_FILE)).unwrap();
        assert_eq!(first, second);
    }

    #[test]
    fn pac_and_cz_flags_are_empty_fields() {
        let dir = tempfile::tempdir().unwrap();
        write_reports(dir.path(), &sample_reports()).unwrap();
        let fig9 = std::fs::read_to_string(dir.path().join(FIG9_FILE)).unwrap();
        assert!(fig9.contains("deleted,pac,\n"));
        assert!(fig9.contains("deleted,cz,\n"));
    }
}
