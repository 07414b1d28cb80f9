use std::fs;
use std::path::Path;
use std::process::{Command, Output};

mod common;

fn plansim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_plansim"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn two_doc_corpus(root: &Path) -> std::path::PathBuf {
    let c = root.join("corpus");
    fs::create_dir_all(&c).unwrap();
    fs::write(
        c.join("Avanza Pais.txt"),
        "Economía y empleo para todos. Salud pública de calidad.",
    )
    .unwrap();
    fs::write(
        c.join("Accion Popular.txt"),
        "Educación y salud. Lucha contra la corrupción en el Congreso.",
    )
    .unwrap();
    c
}

#[test]
fn wordcloud_writes_svg_and_csv_per_document() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = two_doc_corpus(dir.path());
    let out = dir.path().join("out");
    let o = plansim(&["wordcloud", "--corpus", s(&corpus), "--output", s(&out)]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(common::snapshot(&out).len(), 4);
    assert!(out.join("wordcloud-avanza-pais.svg").exists());
    assert!(out.join("terms-accion-popular.csv").exists());
    assert!(stderr(&o).contains("\"top_n\":100"), "config trace missing");
}

#[test]
fn wordcloud_top_one() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = two_doc_corpus(dir.path());
    let out = dir.path().join("out");
    let o = plansim(&[
        "wordcloud",
        "--corpus",
        s(&corpus),
        "--output",
        s(&out),
        "--top",
        "1",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    for id in ["avanza-pais", "accion-popular"] {
        let csv = fs::read_to_string(out.join(format!("terms-{id}.csv"))).unwrap();
        assert_eq!(csv.lines().count(), 2, "{csv}");
    }
}

#[test]
fn missing_corpus_names_the_path() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("no-such-corpus");
    let o = plansim(&[
        "wordcloud",
        "--corpus",
        s(&missing),
        "--output",
        s(dir.path()),
    ]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("no-such-corpus"));
}

#[test]
fn areas_default_and_custom_lexicons() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = two_doc_corpus(dir.path());
    fs::write(corpus.join("Vacio.txt"), "Turismo y cultura.").unwrap();
    let out = dir.path().join("out");
    let o = plansim(&["areas", "--corpus", s(&corpus), "--output", s(&out)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = fs::read_to_string(out.join("areas.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 4);
    assert_eq!(lines[0], ",economia,salud,educacion,politica");
    assert_eq!(lines[3], "vacio,0.000000,0.000000,0.000000,0.000000");

    let lex = dir.path().join("lex.json");
    fs::write(&lex, r#"{"salud": ["salud", "Pública"]}"#).unwrap();
    let o = plansim(&[
        "areas",
        "--corpus",
        s(&corpus),
        "--output",
        s(&out),
        "--lexicon",
        s(&lex),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = fs::read_to_string(out.join("areas.csv")).unwrap();
    assert!(csv.lines().all(|l| l.split(',').count() == 2));

    fs::write(&lex, r#"{"a": ["salud"], "b": ["Salud"]}"#).unwrap();
    let o = plansim(&[
        "areas",
        "--corpus",
        s(&corpus),
        "--output",
        s(&out),
        "--lexicon",
        s(&lex),
    ]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("\"salud\""), "{}", stderr(&o));
}

#[test]
fn compare_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("c");
    fs::create_dir_all(&corpus).unwrap();
    let text = common::plan_text(9, 12);
    fs::write(corpus.join("a.txt"), &text).unwrap();
    fs::write(corpus.join("b.txt"), &text).unwrap();
    let out = dir.path().join("out");
    let o = plansim(&["compare", "--corpus", s(&corpus), "--output", s(&out)]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(
        fs::read_to_string(out.join("doc-similarity.csv")).unwrap(),
        ",a,b\na,1.000000,1.000000\nb,1.000000,1.000000\n"
    );
    let svg = fs::read_to_string(out.join("doc-similarity.svg")).unwrap();
    assert_eq!(svg.matches("<rect").count(), 4);
}

#[test]
fn compare_needs_two_documents() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("c");
    fs::create_dir_all(&corpus).unwrap();
    fs::write(corpus.join("a.txt"), "solo uno.").unwrap();
    let o = plansim(&[
        "compare",
        "--corpus",
        s(&corpus),
        "--output",
        s(&dir.path().join("o")),
    ]);
    assert!(!o.status.success());
}

#[test]
fn align_with_bundled_catalog() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = two_doc_corpus(dir.path());
    fs::write(
        corpus.join("Verbatim.txt"),
        "Texto previo. Conservar y utilizar sosteniblemente los océanos, los mares y los recursos marinos para el desarrollo sostenible.",
    )
    .unwrap();
    let out = dir.path().join("out");
    let goals = common::sdg_catalog_path();
    let o = plansim(&[
        "align",
        "--corpus",
        s(&corpus),
        "--goals",
        s(&goals),
        "--output",
        s(&out),
        "--k",
        "1",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = fs::read_to_string(out.join("goal-alignment.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 4);
    assert!(lines.iter().all(|l| l.split(',').count() == 18));
    let header: Vec<&str> = lines[0].split(',').collect();
    let col = header.iter().position(|h| *h == "ods-14").unwrap();
    let verbatim: Vec<&str> = lines[3].split(',').collect();
    assert_eq!(verbatim[0], "verbatim");
    assert_eq!(verbatim[col], "1.000000");
    let svg = fs::read_to_string(out.join("goal-alignment.svg")).unwrap();
    assert_eq!(svg.matches("<rect").count(), 3 * 17);
}

#[test]
fn align_requires_goals() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = two_doc_corpus(dir.path());
    let out = dir.path().join("out");
    let o = plansim(&["align", "--corpus", s(&corpus), "--output", s(&out)]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("--goals"), "{}", stderr(&o));

    let missing = dir.path().join("missing-goals.json");
    let o = plansim(&[
        "align",
        "--corpus",
        s(&corpus),
        "--goals",
        s(&missing),
        "--output",
        s(&out),
    ]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("missing-goals.json"));
}

#[test]
fn report_without_goals_has_null_alignment() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = two_doc_corpus(dir.path());
    let out = dir.path().join("out");
    let o = plansim(&["report", "--corpus", s(&corpus), "--output", s(&out)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    let obj = json.as_object().unwrap();
    for key in [
        "corpus_summary",
        "term_weights",
        "area_scores",
        "doc_matrix",
        "alignment_matrix",
        "params_echo",
    ] {
        assert!(obj.contains_key(key), "missing {key}");
    }
    assert!(json["alignment_matrix"].is_null());
    assert!(!out.join("goal-alignment.csv").exists());
}

#[test]
fn report_echoes_parameters() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = two_doc_corpus(dir.path());
    let out = dir.path().join("out");
    let goals = common::sdg_catalog_path();
    let o = plansim(&[
        "report",
        "--corpus",
        s(&corpus),
        "--goals",
        s(&goals),
        "--output",
        s(&out),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = fs::read_to_string(out.join("report.json")).unwrap();
    let json: serde_json::Value = serde_json::from_str(&text).unwrap();
    let p = &json["params_echo"];
    assert_eq!(p["prefix_scale"], 0.1);
    assert_eq!(p["max_prefix"], 4);
    assert_eq!(p["alignment_aggregation"]["k"], 5);
    assert_eq!(p["alignment_aggregation"]["kind"], "top_k_mean");
    assert_eq!(p["doc_aggregation"]["kind"], "mean_of_best");
    assert_eq!(
        json["alignment_matrix"]["col_labels"]
            .as_array()
            .unwrap()
            .len(),
        17
    );
    // top-level keys in bundle order
    let order: Vec<usize> = [
        "\"corpus_summary\"",
        "\"term_weights\"",
        "\"area_scores\"",
        "\"doc_matrix\"",
        "\"alignment_matrix\"",
        "\"params_echo\"",
    ]
    .iter()
    .map(|k| text.find(k).unwrap())
    .collect();
    assert!(order.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn invalid_flags_are_named() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = two_doc_corpus(dir.path());
    let o = plansim(&["compare", "--corpus", s(&corpus), "--k", "0"]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("--k"));
    let o = plansim(&["compare", "--corpus", s(&corpus), "--aggregation", "median"]);
    assert!(!o.status.success());
}
