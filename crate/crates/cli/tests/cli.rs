use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn pack() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/data/mini-turkish.lang")
}

fn corpus() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/data/corpus.tsv")
}

fn run(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_agglutspell"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child
        .stdin
        .take()
        .unwrap()
        .write_all(stdin.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn with_pack<'a>(cmd: &'a str, rest: &[&'a str], lang: &'a str) -> Vec<&'a str> {
    let mut args = vec![cmd, "--lang", lang];
    args.extend_from_slice(rest);
    args
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

#[test]
fn check_verdicts_and_exit_codes() {
    let lang = pack();
    let lang = lang.to_str().unwrap();
    let ok = run(&with_pack("check", &["kalaylamak"], lang), "");
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(stdout(&ok), "OK\n");
    let bad = run(&with_pack("check", &["kalashlamak"], lang), "");
    assert_eq!(bad.status.code(), Some(1));
    assert_eq!(stdout(&bad), "MISSPELLED\n");
    let empty = run(&with_pack("check", &[""], lang), "");
    assert_eq!(empty.status.code(), Some(1));
    assert_eq!(stdout(&empty), "MISSPELLED\n");
}

#[test]
fn suggest_worked_example() {
    let lang = pack();
    let lang = lang.to_str().unwrap();
    let out = run(
        &with_pack("suggest", &["çaışmalarıyla", "-t", "1"], lang),
        "",
    );
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let rows: Vec<Vec<&str>> = text.lines().map(|l| l.split('\t').collect()).collect();
    assert_eq!(rows.len(), 3);
    let mut surfaces: Vec<&str> = rows.iter().map(|r| r[1]).collect();
    surfaces.sort();
    assert_eq!(
        surfaces,
        ["çalışmalarıyla", "çapışmalarıyla", "çatışmalarıyla"]
    );
    assert_eq!(rows[0][0], "1");
    assert_eq!(rows[0][1], "çalışmalarıyla");
    assert_eq!(rows[0][4], "çal+Hş+mA+lArH+ylA");
    for row in &rows {
        assert_eq!(row.len(), 5);
        assert_eq!(row[2], "1");
        assert_eq!(row[3].split('.').nth(1).map(str::len), Some(4));
    }
    let wider = run(
        &with_pack("suggest", &["çaışmalarıyla", "-t", "2"], lang),
        "",
    );
    assert!(stdout(&wider).lines().count() > 3);
}

#[test]
fn valid_word_ranks_itself_first() {
    let lang = pack();
    let out = run(
        &with_pack("suggest", &["evlerin"], lang.to_str().unwrap()),
        "",
    );
    let first = stdout(&out).lines().next().unwrap().to_string();
    assert!(first.starts_with("1\tevlerin\t0\t0.0000\t"), "{first}");
}

#[test]
fn json_carries_the_same_fields() {
    let lang = pack();
    let lang = lang.to_str().unwrap();
    let tsv = stdout(&run(
        &with_pack("suggest", &["gelecegim", "-t", "2"], lang),
        "",
    ));
    let json = stdout(&run(
        &with_pack(
            "suggest",
            &["gelecegim", "-t", "2", "--json", "--stats"],
            lang,
        ),
        "",
    ));
    let doc: Value = serde_json::from_str(&json).unwrap();
    let rows = doc["suggestions"].as_array().unwrap();
    assert_eq!(rows.len(), tsv.lines().count());
    for (row, line) in rows.iter().zip(tsv.lines()) {
        let rebuilt = format!(
            "{}\t{}\t{}\t{}\t{}",
            row["rank"],
            row["surface"].as_str().unwrap(),
            row["distance"],
            row["score"].as_str().unwrap(),
            row["lexical"].as_str().unwrap()
        );
        assert_eq!(rebuilt, line);
    }
    assert!(doc["stats"]["generations"].as_u64().unwrap() > 0);
}

#[test]
fn stats_line_is_appended() {
    let lang = pack();
    let out = stdout(&run(
        &with_pack(
            "suggest",
            &["çaışmalarıyla", "--stats"],
            lang.to_str().unwrap(),
        ),
        "",
    ));
    let last = out.lines().last().unwrap();
    assert!(last.starts_with("# recognitions="), "{last}");
    assert!(last.contains("solutions=3"));
}

#[test]
fn no_suggestions_notice() {
    let lang = pack();
    let out = run(
        &with_pack("suggest", &["xqxqxq"], lang.to_str().unwrap()),
        "",
    );
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).is_empty());
    assert!(stderr(&out).contains("no suggestions"));
}

#[test]
fn usage_and_pack_errors_exit_2() {
    let lang = pack();
    let lang = lang.to_str().unwrap();
    assert_eq!(
        run(&with_pack("suggest", &["ev", "-t", "4"], lang), "")
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&with_pack("suggest", &["ev", "--k", "2"], lang), "")
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["suggest", "ev"], "").status.code(), Some(2));
    assert_eq!(run(&["frobnicate"], "").status.code(), Some(2));
    let missing = run(&["check", "--lang", "/nonexistent/pack.lang", "ev"], "");
    assert_eq!(missing.status.code(), Some(2));
    assert!(stderr(&missing).contains("cannot open"));

    let dir = std::env::temp_dir().join(format!("agglutspell-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let broken = dir.join("broken.lang");
    let text = std::fs::read_to_string(pack())
        .unwrap()
        .replace("NOUN\tPLU\tlAr", "NOUN\tNOWHERE\tlAr");
    std::fs::write(&broken, text).unwrap();
    let out = run(&["validate-pack", "--lang", broken.to_str().unwrap()], "");
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("NOWHERE"), "{}", stderr(&out));
}

#[test]
fn validate_bundled_pack() {
    let lang = pack();
    let out = run(&with_pack("validate-pack", &[], lang.to_str().unwrap()), "");
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("ok: "));
}

#[test]
fn batch_report_and_aggregate() {
    let lang = pack();
    let lang = lang.to_str().unwrap();
    let corpus = corpus();
    let out = run(
        &with_pack("batch", &[corpus.to_str().unwrap(), "--json"], lang),
        "",
    );
    assert_eq!(out.status.code(), Some(0));
    let doc: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 20);
    let n = rows.len() as f64;
    for (key, field) in [
        ("recognitions", "mean_recognitions"),
        ("generations", "mean_generations"),
        ("edit_ops", "mean_edit_ops"),
        ("solutions", "mean_solutions"),
    ] {
        let sum: u64 = rows.iter().map(|r| r["stats"][key].as_u64().unwrap()).sum();
        assert_eq!(
            doc["aggregate"][field].as_f64().unwrap(),
            sum as f64 / n,
            "{key}"
        );
    }
    let found = rows
        .iter()
        .filter(|r| r["found"] == Value::Bool(true))
        .count();
    assert_eq!(
        doc["aggregate"]["accuracy_found"].as_f64().unwrap(),
        100.0 * found as f64 / n
    );

    let tsv = stdout(&run(
        &with_pack("batch", &[corpus.to_str().unwrap()], lang),
        "",
    ));
    let lines: Vec<&str> = tsv.lines().collect();
    assert!(lines[0].starts_with("word\trecognitions\tgenerations\tedit_ops\tsolutions"));
    assert_eq!(lines.len(), 1 + 20 + 2);
    let mean: Vec<&str> = lines[21].split('\t').collect();
    assert_eq!(mean[0], "mean");
    assert_eq!(
        mean[2],
        format!(
            "{:.2}",
            doc["aggregate"]["mean_generations"].as_f64().unwrap()
        )
    );
    assert_eq!(lines[22], "# words=20 evaluated=20 skipped=0");
    let again = stdout(&run(
        &with_pack("batch", &[corpus.to_str().unwrap()], lang),
        "",
    ));
    assert_eq!(tsv, again, "batch output is deterministic");
}

#[test]
fn batch_skips_malformed_lines() {
    let lang = pack();
    let out = run(
        &with_pack("batch", &["-"], lang.to_str().unwrap()),
        "evlerin\tevlerin\n\tnothing\nkalaylamak\n",
    );
    assert_eq!(out.status.code(), Some(0));
    assert!(stderr(&out).contains("line 2"));
    let text = stdout(&out);
    assert!(
        text.ends_with("# words=2 evaluated=1 skipped=1\n"),
        "{text}"
    );
    let mean = text.lines().find(|l| l.starts_with("mean\t")).unwrap();
    assert!(mean.ends_with("100.0%\t100.0%\t-"), "{mean}");
}

#[test]
fn empty_batch_is_all_zero() {
    let lang = pack();
    let out = run(&with_pack("batch", &["-"], lang.to_str().unwrap()), "");
    let text = stdout(&out);
    assert!(
        text.contains("mean\t0.00\t0.00\t0.00\t0.00\t0.0%\t0.0%\t-"),
        "{text}"
    );
}

#[test]
fn interactive_session() {
    let lang = pack();
    let lang = lang.to_str().unwrap();
    let out = run(
        &with_pack("interactive", &[], lang),
        "çaışmalarıyla\n1\n:quit\n",
    );
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "çalışmalarıyla\n");

    let quit = run(&with_pack("interactive", &[], lang), ":quit\n");
    assert_eq!(stdout(&quit), "");

    let help = run(&with_pack("interactive", &[], lang), ":what\nevlerin\n");
    assert_eq!(help.status.code(), Some(0));
    assert!(stderr(&help).contains(":quit"));
    assert!(stderr(&help).contains("ok"));
    assert_eq!(stdout(&help), "");

    let skip = run(
        &with_pack("interactive", &[], lang),
        "gelecegim\n\nçaışmalarıyla\n3\n",
    );
    assert_eq!(stdout(&skip), "çatışmalarıyla\n");
}
