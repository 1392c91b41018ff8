//! The seven pipeline commands. Each is callable as a library function and
//! writes a manifest beside its outputs.

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use rayon::prelude::*;

use crate::characterize::{
    self, report::CharacterizationReports, ComparisonInputs,
};
use crate::dump::{HistoryType, PostRecord, Timestamp, VoteType};
use crate::features::{
    extract_all, feature_indices, read_matrix, validate_lexicon, write_matrix,
    AuthorIndex, FeatureError, FeatureVector, Label,
};
use crate::learn::{
    balanced_samples, incremental_feature_evaluation, load_model, save_model, AdaBoostModel,
    Dataset, TierRow, TierSpec,
};
use crate::lexicon::Lexicon;
use crate::snapshot::{
    apply_exclusions, find_deleted, join_initiators, read_exclusions, read_initiators,
    InitiatorAnnotation, QuestionSummary, SnapshotCatalog,
};
use crate::util::{sha256_hex, write_atomic};

use super::assemble::{
    annotation_map, catalog_path, collect_question_store, load_catalogs, read_corpus,
    stream_table, union_aux_tables, write_corpus, ParseLog,
};
use super::manifest::Manifest;
use super::{CliError, RunConfig};

/// Builds per-snapshot catalogs from the configured dump directories.
pub fn cmd_ingest(config: &RunConfig) -> Result<Manifest, CliError> {
    let catalogs_dir = config.catalogs_dir();
    std::fs::create_dir_all(&catalogs_dir)
        .map_err(|e| CliError::Internal(format!("create {}: {e}", catalogs_dir.display())))?;

    let snapshots = config.ordered_snapshots();
    let results: Vec<(String, u64, ParseLog, PathBuf)> = snapshots
        .par_iter()
        .map(|snap| {
            let mut log = ParseLog::default();
            let mut posts = Vec::new();
            let found = stream_table::<PostRecord>(snap, &mut log, |p| posts.push(p))?;
            if !found {
                return Err(CliError::Usage(format!(
                    "snapshot {}: no {} in {}",
                    snap.id,
                    crate::dump::FileKind::Posts.file_name(),
                    snap.dir.display()
                )));
            }
            let catalog = SnapshotCatalog::build(posts, snap.id.clone(), snap.date)
                .map_err(|e| CliError::Data(e.to_string()))?;
            let path = catalog_path(&catalogs_dir, &snap.id);
            catalog
                .write_to(&path)
                .map_err(|e| CliError::Internal(format!("{}: {e}", path.display())))?;
            Ok((snap.id.clone(), catalog.len() as u64, log, path))
        })
        .collect::<Result<_, CliError>>()?;

    let mut manifest = Manifest::new("ingest", config)?;
    let mut log = ParseLog::default();
    for snap in &snapshots {
        manifest.add_input(&snap.dir.join(crate::dump::FileKind::Posts.file_name()))?;
    }
    for (id, questions, snap_log, path) in results {
        manifest.count(&format!("questions_{id}"), questions);
        manifest.count(&format!("malformed_rows_{id}"), snap_log.count());
        log.rows.extend(snap_log.rows);
        manifest.add_output(&path)?;
    }
    let errors_path = catalogs_dir.join("parse_errors.csv");
    log.write(&errors_path)?;
    manifest.add_output(&errors_path)?;
    manifest.count("malformed_rows_total", log.count());
    manifest.write(&catalogs_dir.join("manifest.json"))?;
    Ok(manifest)
}

/// Computes the deleted-question corpus by set difference, applying the
/// exclusion list and joining initiator annotations.
pub fn cmd_diff(config: &RunConfig) -> Result<Manifest, CliError> {
    let mut catalogs = load_catalogs(config)?;
    let latest = catalogs.pop().expect("config validated as non-empty");
    let mut manifest = Manifest::new("diff", config)?;
    for snap in config.ordered_snapshots() {
        manifest.add_input(&catalog_path(&config.catalogs_dir(), &snap.id))?;
    }

    let raw = find_deleted(&catalogs, &latest).map_err(|e| CliError::Data(e.to_string()))?;
    manifest.count("candidates", raw.len() as u64);

    let set = match &config.exclusions {
        Some(path) => {
            manifest.add_input(path)?;
            let exclusions =
                read_exclusions(path).map_err(|e| CliError::Data(e.to_string()))?;
            apply_exclusions(&raw, &exclusions)
        }
        None => raw,
    };
    manifest.count("exclusions_applied", set.exclusions_applied);
    manifest.count("corpus", set.len() as u64);

    let annotations: Vec<InitiatorAnnotation> = match &config.initiators {
        Some(path) => {
            manifest.add_input(path)?;
            read_initiators(path).map_err(|e| CliError::Data(e.to_string()))?
        }
        None => Vec::new(),
    };
    let partition = join_initiators(&set, annotations);
    manifest.count("initiator_author", partition.author.len() as u64);
    manifest.count("initiator_moderator", partition.moderator.len() as u64);
    manifest.count("initiator_unknown", partition.unknown.len() as u64);
    manifest.count("annotations_skipped", partition.skipped_annotations);

    let corpus_path = config.corpus_file();
    write_corpus(&corpus_path, &set, &partition)?;
    manifest.add_output(&corpus_path)?;
    manifest.write(&config.out_dir.join("diff_manifest.json"))?;
    Ok(manifest)
}

/// Computes every characterization table and writes the report directory.
pub fn cmd_characterize(config: &RunConfig) -> Result<Manifest, CliError> {
    let mut manifest = Manifest::new("characterize", config)?;
    let catalogs = load_catalogs(config)?;
    let corpus_path = config.corpus_file();
    manifest.add_input(&corpus_path)?;
    let (deleted, partition) = read_corpus(&corpus_path)?;

    let mut log = ParseLog::default();
    let aux = union_aux_tables(config, &mut log)?;

    // Closed class: questions visible in the latest snapshot that carry a
    // close event.
    let latest_catalog = catalogs.last().expect("non-empty");
    let closed_ids: BTreeSet<u64> = aux
        .history
        .iter()
        .filter(|h| h.history_type == HistoryType::PostClosed)
        .map(|h| h.post_id)
        .filter(|id| latest_catalog.contains(*id))
        .collect();

    let store = collect_question_store(config, &deleted, &closed_ids, &mut log)?;

    // All questions ever seen, for the monthly series.
    let mut all_questions: BTreeMap<u64, Timestamp> = BTreeMap::new();
    for catalog in &catalogs {
        for (id, summary) in catalog.summaries() {
            all_questions.entry(id).or_insert(summary.creation_date);
        }
    }
    let monthly = characterize::monthly_deletion_ratio(
        all_questions.iter().map(|(&id, &t)| (id, t)),
        &deleted,
    );

    // Vote analyses.
    let creation_dates: BTreeMap<u64, Timestamp> = deleted
        .ids()
        .filter_map(|id| all_questions.get(&id).map(|&t| (id, t)))
        .collect();
    let vote_latency = characterize::first_delete_vote_latency(&aux.votes, &deleted, &creation_dates);
    let vote_histogram = characterize::delete_vote_histogram(&aux.votes, &deleted);

    // Deletion timestamps: post-deleted events, then the documented
    // fallback to the last deletion-vote date.
    let mut deletion_times: BTreeMap<u64, Timestamp> = BTreeMap::new();
    for event in &aux.history {
        if event.history_type == HistoryType::PostDeleted && deleted.contains(event.post_id) {
            deletion_times
                .entry(event.post_id)
                .and_modify(|t| *t = (*t).min(event.creation_date))
                .or_insert(event.creation_date);
        }
    }
    let mut last_vote: BTreeMap<u64, Timestamp> = BTreeMap::new();
    for vote in &aux.votes {
        if vote.vote_type == VoteType::Deletion && deleted.contains(vote.post_id) {
            last_vote
                .entry(vote.post_id)
                .and_modify(|t| *t = (*t).max(vote.creation_date))
                .or_insert(vote.creation_date);
        }
    }
    for (id, t) in last_vote {
        deletion_times.entry(id).or_insert(t);
    }

    let question_summaries: BTreeMap<u64, QuestionSummary> = store
        .deleted_records
        .iter()
        .map(|record| {
            (
                record.id,
                QuestionSummary {
                    creation_date: record.creation_date,
                    score: record.score,
                    owner_user_id: record.owner_user_id,
                    tags: record.tags.clone(),
                },
            )
        })
        .collect();
    let comparisons = characterize::initiator_comparison(&ComparisonInputs {
        partition: &partition,
        questions: &question_summaries,
        users: &aux.users,
        deletion_times: &deletion_times,
        posts_by_owner: &store.posts_by_owner,
    });

    // Quality indicators for the deleted and closed classes.
    let class_quality = |records: &[PostRecord]| {
        let ids: BTreeSet<u64> = records.iter().map(|r| r.id).collect();
        let answers = store
            .answer_parents
            .iter()
            .filter(|(_, parent)| ids.contains(parent))
            .map(|(_, &parent)| parent);
        let comments = aux
            .comments
            .iter()
            .filter(|c| ids.contains(&c.post_id))
            .map(|c| c.score);
        characterize::quality_indicators(records, answers, comments)
    };
    let quality = vec![
        ("deleted".to_string(), class_quality(&store.deleted_records)),
        ("closed".to_string(), class_quality(&store.closed_records)),
    ];

    // Tag algebra over regular / closed / deleted tag multisets.
    let regular_tags: Vec<String> = latest_catalog
        .summaries()
        .filter(|(id, _)| !closed_ids.contains(id))
        .flat_map(|(_, s)| s.tags.iter().cloned())
        .collect();
    let closed_tags: Vec<String> = store
        .closed_records
        .iter()
        .flat_map(|r| r.tags.iter().cloned())
        .collect();
    let deleted_tags: Vec<String> = store
        .deleted_records
        .iter()
        .flat_map(|r| r.tags.iter().cloned())
        .collect();
    let tags = characterize::tag_algebra(regular_tags, closed_tags, deleted_tags, 50);

    let edits = characterize::edit_summary(&aux.history, &partition);
    let undelete = characterize::undelete_latency(&aux.history, &annotation_map(config)?);

    let reports = CharacterizationReports {
        monthly,
        vote_latency,
        vote_histogram,
        partition,
        comparisons,
        quality,
        tags,
        edits,
        undelete,
    };
    let reports_dir = config.reports_dir();
    let written = characterize::report::write_reports(&reports_dir, &reports)
        .map_err(|e| CliError::Internal(format!("write reports: {e}")))?;
    for path in &written {
        manifest.add_output(path)?;
    }
    if !aux.missing_tables.is_empty() {
        manifest.extra_value(
            "absent_reports_due_to_missing_tables",
            serde_json::json!(aux.missing_tables),
        );
    }
    manifest.count("malformed_rows", log.count());
    manifest.count("corpus", deleted.len() as u64);
    manifest.count("closed_class", closed_ids.len() as u64);
    manifest.count("undeleted_questions", reports.undelete.undeleted_questions);
    manifest.write(&reports_dir.join("manifest.json"))?;
    Ok(manifest)
}

/// Extracts the 47-feature matrix for the corpus (positives) and the latest
/// snapshot's questions (negative pool).
pub fn cmd_features(config: &RunConfig) -> Result<Manifest, CliError> {
    let mut manifest = Manifest::new("features", config)?;
    let corpus_path = config.corpus_file();
    manifest.add_input(&corpus_path)?;
    let (deleted, _) = read_corpus(&corpus_path)?;

    let lexicon_path = config.lexicon_path()?;
    manifest.add_input(lexicon_path)?;
    let lexicon =
        Lexicon::load(lexicon_path).map_err(|e| CliError::Data(format!("lexicon: {e}")))?;
    validate_lexicon(&lexicon).map_err(|e| CliError::Data(e.to_string()))?;

    let mut log = ParseLog::default();
    // Author history comes from the latest snapshot: users, badges, posts.
    let latest = config.latest_snapshot();
    let mut index = AuthorIndex::new();
    stream_table::<crate::dump::UserRecord>(latest, &mut log, |u| index.add_user(u))?;
    stream_table::<crate::dump::BadgeRecord>(latest, &mut log, |b| index.add_badge(&b))?;
    let found_posts =
        stream_table::<PostRecord>(latest, &mut log, |p| index.add_post(&p))?;
    if !found_posts {
        return Err(CliError::Usage(format!(
            "latest snapshot {} has no Posts.xml",
            latest.dir.display()
        )));
    }

    // Deleted question records from their provenance snapshots.
    let mut question_records: Vec<(PostRecord, Label)> = Vec::new();
    let mut seen: BTreeSet<u64> = BTreeSet::new();
    for snap in config.earlier_snapshots() {
        let snap_id = snap.id.clone();
        stream_table::<PostRecord>(snap, &mut log, |post| {
            if post.is_question()
                && deleted.contains(post.id)
                && deleted.provenance(post.id) == Some(snap_id.as_str())
                && seen.insert(post.id)
            {
                question_records.push((post, Label::Deleted));
            }
        })?;
    }
    // Negative pool: every question in the latest snapshot.
    stream_table::<PostRecord>(latest, &mut log, |post| {
        if post.is_question() {
            question_records.push((post, Label::NonDeleted));
        }
    })?;
    question_records.sort_by_key(|(post, _)| post.id);

    let mut vectors: Vec<FeatureVector> = Vec::with_capacity(question_records.len());
    let mut excluded_missing_author = 0u64;
    let extracted: Vec<Result<FeatureVector, FeatureError>> = question_records
        .par_iter()
        .map(|(post, label)| extract_all(post, &index, &lexicon, *label))
        .collect();
    for result in extracted {
        match result {
            Ok(vector) => vectors.push(vector),
            Err(FeatureError::UnknownUser { .. }) => excluded_missing_author += 1,
            Err(e) => return Err(CliError::Data(e.to_string())),
        }
    }

    let features_path = config.features_file();
    write_matrix(&features_path, &vectors).map_err(|e| CliError::Internal(e.to_string()))?;
    manifest.add_output(&features_path)?;
    manifest.count("rows", vectors.len() as u64);
    manifest.count(
        "positives",
        vectors.iter().filter(|v| v.label == Label::Deleted).count() as u64,
    );
    manifest.count(
        "negatives",
        vectors
            .iter()
            .filter(|v| v.label == Label::NonDeleted)
            .count() as u64,
    );
    manifest.count("excluded_missing_author", excluded_missing_author);
    manifest.count("malformed_rows", log.count());
    manifest.write(&config.out_dir.join("features_manifest.json"))?;
    Ok(manifest)
}

fn split_pools(path: &std::path::Path) -> Result<(Dataset, Dataset, u64), CliError> {
    let vectors = read_matrix(path).map_err(|e| CliError::Data(e.to_string()))?;
    let mut positives = Vec::new();
    let mut negatives = Vec::new();
    let mut unlabeled = 0;
    for v in vectors {
        match v.label {
            Label::Deleted => positives.push(v),
            Label::NonDeleted => negatives.push(v),
            Label::Unlabeled => unlabeled += 1,
        }
    }
    if positives.is_empty() || negatives.is_empty() {
        return Err(CliError::Data(
            "feature matrix must contain both labeled classes".into(),
        ));
    }
    let positives = Dataset::from_vectors(&positives).map_err(|e| CliError::Data(e.to_string()))?;
    let negatives = Dataset::from_vectors(&negatives).map_err(|e| CliError::Data(e.to_string()))?;
    Ok((positives, negatives, unlabeled))
}

fn sample_digest(sample: &Dataset) -> String {
    let ids: Vec<String> = sample.ids().iter().map(|id| id.to_string()).collect();
    sha256_hex(ids.join(",").as_bytes())
}

/// Trains the deployable model on the first balanced sample.
pub fn cmd_train(config: &RunConfig) -> Result<Manifest, CliError> {
    let mut manifest = Manifest::new("train", config)?;
    let features_path = config.features_file();
    manifest.add_input(&features_path)?;
    let (positives, negatives, unlabeled) = split_pools(&features_path)?;

    let samples = balanced_samples(
        &positives,
        &negatives,
        config.learner.k_samples,
        config.seed,
    )
    .map_err(|e| CliError::Data(e.to_string()))?;
    let digests: Vec<String> = samples.iter().map(sample_digest).collect();

    let model = AdaBoostModel::fit(&samples[0], &config.learner.boost_params())
        .map_err(|e| CliError::Data(e.to_string()))?;
    let model_path = config.model_file();
    save_model(&model_path, &model).map_err(|e| CliError::Internal(e.to_string()))?;
    manifest.add_output(&model_path)?;
    manifest.count("positives", positives.n_rows() as u64);
    manifest.count("negative_pool", negatives.n_rows() as u64);
    manifest.count("unlabeled_skipped", unlabeled);
    manifest.count("estimators", model.trees.len() as u64);
    manifest.extra_value("negative_sample_digests", serde_json::json!(digests));
    manifest.write(&config.out_dir.join("train_manifest.json"))?;
    Ok(manifest)
}

fn pct100(v: f64) -> f64 {
    v * 100.0
}

/// Runs the tiered evaluation protocol and writes the evaluation reports.
pub fn cmd_evaluate(config: &RunConfig) -> Result<Manifest, CliError> {
    let mut manifest = Manifest::new("evaluate", config)?;
    let features_path = config.features_file();
    manifest.add_input(&features_path)?;
    let (positives, negatives, _) = split_pools(&features_path)?;

    let mut tiers = Vec::new();
    for tier in &config.tiers {
        let sets = tier.feature_sets()?;
        tiers.push(TierSpec {
            name: tier.name.clone(),
            columns: feature_indices(&sets),
        });
    }
    let rows = incremental_feature_evaluation(
        &positives,
        &negatives,
        &tiers,
        &config.learner.experiment_params(),
        config.seed,
    )
    .map_err(|e| CliError::Data(e.to_string()))?;

    let eval_dir = config.evaluation_dir();
    std::fs::create_dir_all(&eval_dir)
        .map_err(|e| CliError::Internal(format!("create {}: {e}", eval_dir.display())))?;

    let metric_table = |pick: fn(&TierRow) -> crate::learn::MetricAggregate| {
        let mut out =
            String::from("tier,f1_mean,f1_std,accuracy_mean,accuracy_std,auc_mean,auc_std\n");
        for row in &rows {
            let m = pick(row);
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                row.tier,
                pct100(m.f1.mean),
                pct100(m.f1.std),
                pct100(m.accuracy.mean),
                pct100(m.accuracy.std),
                pct100(m.auc.mean),
                pct100(m.auc.std),
            ));
        }
        out
    };
    let tiers_path = eval_dir.join("tiers.csv");
    write_atomic(&tiers_path, metric_table(|r| r.test).as_bytes())
        .map_err(|e| CliError::Internal(e.to_string()))?;
    let tiers_cv_path = eval_dir.join("tiers_cv.csv");
    write_atomic(&tiers_cv_path, metric_table(|r| r.cv).as_bytes())
        .map_err(|e| CliError::Internal(e.to_string()))?;

    let last = rows.last().expect("validated: at least one tier");
    let confusion_path = eval_dir.join("confusion.csv");
    let c = &last.confusion;
    let pct = c.row_percentages();
    let confusion_csv = format!(
        "actual,predicted_deleted,predicted_non_deleted,predicted_deleted_pct,predicted_non_deleted_pct\n\
         deleted,{},{},{},{}\nnon_deleted,{},{},{},{}\n",
        c.true_positive, c.false_negative, pct[0][0], pct[0][1],
        c.false_positive, c.true_negative, pct[1][0], pct[1][1],
    );
    write_atomic(&confusion_path, confusion_csv.as_bytes())
        .map_err(|e| CliError::Internal(e.to_string()))?;

    let importance_path = eval_dir.join("importance.csv");
    let mut importance_csv = String::from("rank,feature,importance\n");
    let mut ranked: Vec<(usize, &String, f64)> = last
        .importances
        .iter()
        .enumerate()
        .map(|(i, &imp)| (i, &last.feature_names[i], imp))
        .collect();
    ranked.sort_by(|a, b| b.2.total_cmp(&a.2).then(a.0.cmp(&b.0)));
    for (rank, (_, name, imp)) in ranked.iter().enumerate() {
        importance_csv.push_str(&format!("{},{},{}\n", rank + 1, name, imp));
    }
    write_atomic(&importance_path, importance_csv.as_bytes())
        .map_err(|e| CliError::Internal(e.to_string()))?;

    let report_path = eval_dir.join("report.json");
    let report_json = serde_json::to_string_pretty(&rows)
        .map_err(|e| CliError::Internal(format!("report serialize: {e}")))?;
    write_atomic(&report_path, report_json.as_bytes())
        .map_err(|e| CliError::Internal(e.to_string()))?;

    for path in [&tiers_path, &tiers_cv_path, &confusion_path, &importance_path, &report_path] {
        manifest.add_output(path)?;
    }
    manifest.count("tiers", rows.len() as u64);
    manifest.count("samples", config.learner.k_samples as u64);
    manifest.write(&eval_dir.join("manifest.json"))?;
    Ok(manifest)
}

/// Scores a feature matrix with a saved model.
pub fn cmd_predict(config: &RunConfig) -> Result<Manifest, CliError> {
    let mut manifest = Manifest::new("predict", config)?;
    let model_path = config.model_file();
    manifest.add_input(&model_path)?;
    let model = load_model(&model_path).map_err(|e| CliError::Data(e.to_string()))?;

    let features_path = config.features_file();
    manifest.add_input(&features_path)?;
    let vectors = read_matrix(&features_path).map_err(|e| CliError::Data(e.to_string()))?;

    // Project matrix columns onto the model's feature order.
    let columns: Vec<usize> = model
        .feature_names
        .iter()
        .map(|name| {
            crate::features::feature_index(name).ok_or_else(|| {
                CliError::Data(format!("model feature `{name}` not in the matrix contract"))
            })
        })
        .collect::<Result<_, _>>()?;

    let mut out = String::from("question_id,probability,predicted_label\n");
    for v in &vectors {
        let row: Vec<f64> = columns.iter().map(|&c| v.values[c]).collect();
        let probability = model
            .predict_proba(&row)
            .map_err(|e| CliError::Data(e.to_string()))?;
        let label = if model.predict(&row).map_err(|e| CliError::Data(e.to_string()))? == 1 {
            "deleted"
        } else {
            "non_deleted"
        };
        out.push_str(&format!("{},{},{}\n", v.question_id, probability, label));
    }
    let predictions_path = config.predictions_file();
    write_atomic(&predictions_path, out.as_bytes())
        .map_err(|e| CliError::Internal(e.to_string()))?;
    manifest.add_output(&predictions_path)?;
    manifest.count("rows", vectors.len() as u64);
    manifest.write(&config.out_dir.join("predict_manifest.json"))?;
    Ok(manifest)
}
