//! Acceptance suite: one test per release criterion, each printing a
//! PASS line (run with `-- --nocapture` to see them all).
//!
//! The suite is fully offline. Frozen inputs live under fixtures/: the
//! 20-pair multilingual metric corpus with reference-scorer values, prompt
//! goldens, the bundled benchmark items with replay transcripts, pinned run
//! outputs, and 50 dictionary-construction transcripts.

use std::collections::BTreeMap;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use dip_core::annotator::{annotate_interleaved, strip_annotations};
use dip_core::answer::Answer;
use dip_core::datasets::DatasetKind;
use dip_core::extraction::{parse_dictionary_response, render_dictionary_entries, ParsedResponse};
use dip_core::harness::{aggregate_table, improvement_stats, RunRecord};
use dip_core::lexicon::{escape_gloss, DuplicatePolicy, Lexicon, LexiconEntry};
use dip_core::metrics::{bleu, chrfpp};
use dip_core::prompts::PromptStrategy;

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn read_fixture(rel: &str) -> String {
    let path = fixtures().join(rel);
    std::fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("reading {}: {e}", path.display()))
}

// ---------------------------------------------------------------------------
// 1. metric oracle equivalence
// ---------------------------------------------------------------------------

#[derive(Deserialize)]
struct CorpusPair {
    script: String,
    hypothesis: String,
    reference: String,
}

#[derive(Deserialize)]
struct ExpectedScores {
    bleu: f64,
    chrfpp: f64,
}

#[derive(Deserialize)]
struct ExpectedFile {
    corpus: ExpectedScores,
    by_script: BTreeMap<String, ExpectedScores>,
}

#[test]
fn criterion_1_metric_oracle_equivalence() {
    let started = Instant::now();
    let pairs: Vec<CorpusPair> = read_fixture("goldens/metrics/corpus20.jsonl")
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(pairs.len(), 20, "frozen corpus must have 20 pairs");
    let expected: ExpectedFile =
        serde_json::from_str(&read_fixture("goldens/metrics/corpus20_expected.json")).unwrap();

    let scripts: std::collections::BTreeSet<&str> =
        pairs.iter().map(|p| p.script.as_str()).collect();
    assert_eq!(
        scripts.into_iter().collect::<Vec<_>>(),
        vec!["arabic", "bengali", "cyrillic", "latin"]
    );

    let check = |subset: &[&CorpusPair], want: &ExpectedScores, label: &str| {
        let hyps: Vec<&str> = subset.iter().map(|p| p.hypothesis.as_str()).collect();
        let refs: Vec<&str> = subset.iter().map(|p| p.reference.as_str()).collect();
        let got_bleu = bleu(&hyps, &refs).unwrap().score;
        let got_chrf = chrfpp(&hyps, &refs).unwrap().score;
        assert!(
            (got_bleu - want.bleu).abs() <= 0.01,
            "{label}: BLEU {got_bleu} vs reference {}",
            want.bleu
        );
        assert!(
            (got_chrf - want.chrfpp).abs() <= 0.01,
            "{label}: chrF++ {got_chrf} vs reference {}",
            want.chrfpp
        );
    };
    check(
        &pairs.iter().collect::<Vec<_>>(),
        &expected.corpus,
        "corpus",
    );
    for (script, want) in &expected.by_script {
        let subset: Vec<&CorpusPair> = pairs.iter().filter(|p| &p.script == script).collect();
        check(&subset, want, script);
    }

    let elapsed = started.elapsed();
    assert!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    println!("ACCEPTANCE 1 (metric oracle equivalence, <1s): PASS");
}

// ---------------------------------------------------------------------------
// 2. metric identities
// ---------------------------------------------------------------------------

fn random_words(rng: &mut ChaCha8Rng, alphabet: &[char], count: usize) -> String {
    (0..count)
        .map(|_| {
            let len = rng.gen_range(1..=5);
            (0..len)
                .map(|_| alphabet[rng.gen_range(0..alphabet.len())])
                .collect::<String>()
        })
        .collect::<Vec<_>>()
        .join(" ")
}

#[test]
fn criterion_2_metric_identities() {
    let latin: Vec<char> = ('a'..='z').collect();
    let cyrillic: Vec<char> = ('а'..='я').collect();
    let arabic: Vec<char> = "ابتثجحخدذرزسشصضطظعغفقكلمن".chars().collect();
    let bengali: Vec<char> = "অআইউকখগঘচছজঝটঠডঢতথদধনপফবভম".chars().collect();
    let scripts = [&latin, &cyrillic, &arabic, &bengali];
    let mut rng = ChaCha8Rng::seed_from_u64(0x1DE17171E5);

    for case in 0..1000 {
        let alphabet = scripts[case % scripts.len()];
        // at least one segment reaches the full n-gram order; corpora of
        // only sub-4-token segments score 0 by definition, identical or not
        let corpus: Vec<String> = (0..rng.gen_range(1..=4))
            .map(|i| {
                let words = if i == 0 {
                    rng.gen_range(4..=8)
                } else {
                    rng.gen_range(1..=8)
                };
                random_words(&mut rng, alphabet, words)
            })
            .collect();
        let b = bleu(&corpus, &corpus).unwrap().score;
        let c = chrfpp(&corpus, &corpus).unwrap().score;
        assert_eq!(b, 100.0, "identity BLEU for {corpus:?}");
        assert_eq!(c, 100.0, "identity chrF++ for {corpus:?}");
    }

    for _case in 0..1000 {
        // hypotheses and references over disjoint alphabets; hypotheses
        // shorter than the n-gram order so smoothing cannot lift the score
        let len = rng.gen_range(1..=3);
        let hyps: Vec<String> = (0..len)
            .map(|_| {
                let words = rng.gen_range(1..=3);
                random_words(&mut rng, &latin, words)
            })
            .collect();
        let refs: Vec<String> = (0..len)
            .map(|_| {
                let words = rng.gen_range(4..=9);
                random_words(&mut rng, &cyrillic, words)
            })
            .collect();
        let b = bleu(&hyps, &refs).unwrap().score;
        let c = chrfpp(&hyps, &refs).unwrap().score;
        assert!(b <= 0.01, "disjoint BLEU {b} for {hyps:?} vs {refs:?}");
        assert!(c <= 0.01, "disjoint chrF++ {c}");
    }
    println!("ACCEPTANCE 2 (metric identities, 1000 cases each): PASS");
}

// ---------------------------------------------------------------------------
// 3. annotation round-trip
// ---------------------------------------------------------------------------

#[test]
fn criterion_3_annotation_round_trip() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xA99067A7E);
    let latin: Vec<char> = ('a'..='f').collect();
    let cyrillic: Vec<char> = "абвгде".chars().collect();
    let separators = [" ", ", ", ". ", " - ", "; ", "? ", "\u{a0}"];

    for case in 0..10_000 {
        let alphabet: &[char] = if case % 2 == 0 { &latin } else { &cyrillic };
        // random text over small-alphabet words; parentheses appear only in
        // glosses, which the load path escapes
        let mut text = String::new();
        for _ in 0..rng.gen_range(0..10) {
            if rng.gen_bool(0.15) {
                text.push_str(&rng.gen_range(0..100).to_string());
            } else {
                let len = rng.gen_range(1..=4);
                for _ in 0..len {
                    text.push(alphabet[rng.gen_range(0..alphabet.len())]);
                }
            }
            text.push_str(separators[rng.gen_range(0..separators.len())]);
        }

        let entries: Vec<LexiconEntry> = (0..rng.gen_range(0..6))
            .map(|i| {
                let words = rng.gen_range(1..=2);
                let surface = (0..words)
                    .map(|_| {
                        let len = rng.gen_range(1..=4);
                        (0..len)
                            .map(|_| alphabet[rng.gen_range(0..alphabet.len())])
                            .collect::<String>()
                    })
                    .collect::<Vec<_>>()
                    .join(" ");
                let gloss = match i % 3 {
                    0 => format!("gloss{i}"),
                    1 => format!("gloss (variant {i})"),
                    _ => format!("(g{i}) option"),
                };
                LexiconEntry::new(&surface, &gloss).unwrap()
            })
            .collect();
        let lexicon =
            Lexicon::from_entries("test", entries, DuplicatePolicy::FirstWins).unwrap();

        let annotated = annotate_interleaved(&text, &lexicon);
        let stripped = strip_annotations(&annotated.text).unwrap_or_else(|e| {
            panic!("strip failed on {:?} -> {:?}: {e}", text, annotated.text)
        });
        assert_eq!(stripped, text, "annotated: {:?}", annotated.text);
    }

    let elapsed = started.elapsed();
    assert!(elapsed < Duration::from_secs(10), "took {elapsed:?}");
    println!("ACCEPTANCE 3 (annotation round-trip, 10000 cases, <10s): PASS");
}

// ---------------------------------------------------------------------------
// 4. prompt goldens
// ---------------------------------------------------------------------------

#[test]
fn criterion_4_prompt_goldens() {
    let lexicon = dip_core::lexicon::load_lexicon(&fixtures().join("lexicons/bug_Latn.jsonl"))
        .unwrap();
    let items =
        dip_core::datasets::load_dataset(&fixtures().join("datasets/gsm8k.jsonl")).unwrap();
    let item = items.iter().find(|i| i.id == "gsm8k-bug_Latn-1").unwrap();

    for strategy in PromptStrategy::ALL {
        let golden = read_fixture(&format!("goldens/prompts/{}.txt", strategy.name()));
        let prompt = dip_core::prompts::build_prompt(
            strategy,
            item,
            strategy.uses_lexicon().then_some(&lexicon),
        )
        .unwrap();
        assert_eq!(
            prompt.text,
            golden,
            "strategy {strategy} differs from its golden"
        );
    }

    let dip_golden = read_fixture("goldens/prompts/dip.txt");
    for line in [
        "Solve the question. The question is made up of the",
        "First translate the following question from",
        "Note: Your output format is as follows:",
        "3.The final numerical answer",
    ] {
        assert!(dip_golden.contains(line), "golden lacks {line:?}");
    }
    assert!(dip_golden.contains("First translate the following question"));
    println!("ACCEPTANCE 4 (prompt goldens, 8 strategies byte-identical): PASS");
}

// ---------------------------------------------------------------------------
// 5 & 6. aggregation and statistics reproduction
// ---------------------------------------------------------------------------

const LANGS: [&str; 10] = [
    "kaz_Cyrl", "nso_Latn", "srp_Cyrl", "xho_Latn", "ibo_Latn", "tum_Latn", "asm_Beng",
    "bug_Latn", "ckb_Arab", "azb_Arab",
];
const GSM8K_STANDARD: [f64; 10] =
    [17.89, 9.10, 15.62, 11.52, 11.30, 5.91, 14.25, 5.84, 9.55, 9.40];
const GSM8K_DIP: [f64; 10] =
    [67.93, 46.17, 80.36, 67.10, 53.30, 43.29, 68.61, 60.50, 63.68, 68.31];
const SVAMP_STANDARD: [f64; 10] =
    [53.33, 42.00, 46.33, 48.33, 36.67, 28.33, 53.00, 25.33, 37.67, 40.67];
const SVAMP_DIP: [f64; 10] =
    [78.33, 57.00, 89.67, 76.67, 65.33, 65.67, 77.67, 71.00, 78.67, 75.00];

/// Expand per-language percentages into synthetic records whose
/// accuracy reproduces each cell exactly (10000 records per cell).
fn synthetic_records(
    dataset: DatasetKind,
    strategy: PromptStrategy,
    cells: &[f64],
) -> Vec<RunRecord> {
    let mut records = Vec::new();
    for (language, percent) in LANGS.iter().zip(cells) {
        let correct = (percent * 100.0).round() as usize;
        for i in 0..10_000 {
            records.push(RunRecord {
                item_id: format!("i{i}"),
                dataset,
                language: language.to_string(),
                strategy,
                prompt_digest: "0".repeat(64),
                parsed: ParsedResponse {
                    translation: None,
                    reasoning: None,
                    final_answer_text: String::new(),
                    answer: Answer::Unparseable,
                },
                correct: i < correct,
                timing_ms: 0,
            });
        }
    }
    records
}

fn average_of(dataset: DatasetKind, strategy: PromptStrategy, cells: &[f64]) -> f64 {
    let records = synthetic_records(dataset, strategy, cells);
    let table = aggregate_table(&records).unwrap();
    table
        .rows
        .iter()
        .find(|r| r.strategy == strategy)
        .unwrap()
        .average
}

#[test]
fn criterion_5_aggregation_reproduction() {
    for (dataset, strategy, cells, want) in [
        (
            DatasetKind::Gsm8k,
            PromptStrategy::Standard,
            &GSM8K_STANDARD,
            11.04,
        ),
        (DatasetKind::Gsm8k, PromptStrategy::DipFull, &GSM8K_DIP, 61.92),
        (
            DatasetKind::Svamp,
            PromptStrategy::Standard,
            &SVAMP_STANDARD,
            41.17,
        ),
        (DatasetKind::Svamp, PromptStrategy::DipFull, &SVAMP_DIP, 73.50),
    ] {
        let got = average_of(dataset, strategy, cells);
        assert!(
            (got - want).abs() <= 0.01,
            "{dataset}/{strategy}: average {got} vs reference {want}"
        );
    }
    println!("ACCEPTANCE 5 (row-average reproduction, 4 reference rows +-0.01): PASS");
}

#[test]
fn criterion_6_statistics_reproduction() {
    let to_map = |cells: &[f64]| -> BTreeMap<String, f64> {
        LANGS
            .iter()
            .zip(cells)
            .map(|(&l, &v)| (l.to_string(), v))
            .collect()
    };
    let stats = improvement_stats(&to_map(&GSM8K_STANDARD), &to_map(&GSM8K_DIP)).unwrap();
    assert_eq!(stats.improved_count, 10, "10/10 languages improved");
    assert_eq!(stats.degraded_count, 0);
    assert_eq!(stats.improved_gt.gt20, 10, "all deltas above 20 points");
    let min_delta = stats.min_improved_delta.unwrap();
    assert!(
        (min_delta - 37.07).abs() < 1e-9,
        "minimum delta {min_delta} vs 37.07"
    );
    println!("ACCEPTANCE 6 (improvement statistics, 10/10 improved, min delta 37.07): PASS");
}

// ---------------------------------------------------------------------------
// 7. end-to-end offline determinism
// ---------------------------------------------------------------------------

#[test]
fn criterion_7_end_to_end_offline_determinism() {
    let config = fixtures().join("run_config.toml");
    let golden_dir = fixtures().join("goldens/run");
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];

    for dir in &dirs {
        let started = Instant::now();
        let output = std::process::Command::new(env!("CARGO_BIN_EXE_dip"))
            .arg("run")
            .arg("--config")
            .arg(&config)
            .arg("--out-dir")
            .arg(dir.path())
            .output()
            .unwrap();
        let elapsed = started.elapsed();
        assert_eq!(
            output.status.code(),
            Some(0),
            "stderr: {}",
            String::from_utf8_lossy(&output.stderr)
        );
        assert!(elapsed < Duration::from_secs(5), "run took {elapsed:?}");
    }

    let records = std::fs::read_to_string(dirs[0].path().join("records.jsonl")).unwrap();
    assert_eq!(
        records.lines().count(),
        30 * 8,
        "3 items x 2 languages x 5 datasets x 8 strategies"
    );

    for name in ["records.jsonl", "table.txt", "stats.json", "table.json"] {
        let first = std::fs::read(dirs[0].path().join(name)).unwrap();
        let second = std::fs::read(dirs[1].path().join(name)).unwrap();
        let golden = std::fs::read(golden_dir.join(name)).unwrap();
        assert_eq!(first, second, "{name}: consecutive runs differ");
        assert_eq!(first, golden, "{name}: run differs from pinned golden");
    }
    println!("ACCEPTANCE 7 (offline run deterministic and byte-identical to goldens, <5s): PASS");
}

// ---------------------------------------------------------------------------
// 8. dictionary-construction parsing
// ---------------------------------------------------------------------------

#[derive(Deserialize)]
struct TranscriptFixture {
    language: String,
    raw: String,
}

#[derive(Deserialize)]
struct ExpectedEntries {
    language: String,
    entries: Vec<ExpectedEntry>,
}

#[derive(Deserialize)]
struct ExpectedEntry {
    source: String,
    gloss: String,
}

#[test]
fn criterion_8_dictionary_construction_parsing() {
    let transcripts: Vec<TranscriptFixture> = read_fixture("dict_transcripts/transcripts.jsonl")
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    let expected: Vec<ExpectedEntries> =
        serde_json::from_str(&read_fixture("dict_transcripts/expected.json")).unwrap();
    assert_eq!(transcripts.len(), 50, "50 fixture transcripts");
    assert_eq!(expected.len(), 50);

    let mut recovered = 0usize;
    let mut total = 0usize;
    for (transcript, want) in transcripts.iter().zip(&expected) {
        assert_eq!(transcript.language, want.language);
        let entries =
            parse_dictionary_response(&transcript.raw, &transcript.language).unwrap();
        assert_eq!(entries.len(), want.entries.len(), "{}", transcript.raw);
        for (got, want) in entries.iter().zip(&want.entries) {
            total += 1;
            if got.source_surface == want.source && got.gloss == want.gloss {
                recovered += 1;
            }
        }
    }
    assert_eq!(recovered, total, "recovered {recovered}/{total} entries");

    // render/parse round-trip over generated entry lists
    let mut rng = ChaCha8Rng::seed_from_u64(0xD1C7);
    let alphabet: Vec<char> = ('a'..='k').collect();
    for _case in 0..10_000 {
        let entries: Vec<LexiconEntry> = (0..rng.gen_range(1..=10))
            .map(|i| {
                let words = rng.gen_range(1..=2);
                let surface = (0..words)
                    .map(|_| {
                        (0..rng.gen_range(1..=5))
                            .map(|_| alphabet[rng.gen_range(0..alphabet.len())])
                            .collect::<String>()
                    })
                    .collect::<Vec<_>>()
                    .join(" ");
                let gloss = if i % 4 == 0 {
                    escape_gloss(&format!("meaning ({i})"))
                } else {
                    format!("meaning {i}")
                };
                LexiconEntry::new(&surface, &gloss).unwrap()
            })
            .collect();
        let rendered = format!("dictionary: {}", render_dictionary_entries(&entries));
        let reparsed = parse_dictionary_response(&rendered, "any").unwrap();
        assert_eq!(reparsed, entries, "round trip failed for {rendered:?}");
    }
    println!("ACCEPTANCE 8 (construction parsing, 50/50 transcripts + 10000 round-trips): PASS");
}

// ---------------------------------------------------------------------------
// 9. live-endpoint compatibility (local chat-completions server)
// ---------------------------------------------------------------------------

/// Serve canned chat-completions responses on a local socket, forever.
fn spawn_chat_completions_server(reply_content: &'static str) -> String {
    let listener = std::net::TcpListener::bind("127.0.0.1:0").unwrap();
    let addr = listener.local_addr().unwrap();
    std::thread::spawn(move || {
        for stream in listener.incoming() {
            let Ok(mut stream) = stream else { continue };
            let mut reader = BufReader::new(stream.try_clone().unwrap());
            let mut content_length = 0usize;
            loop {
                let mut line = String::new();
                if reader.read_line(&mut line).is_err() {
                    break;
                }
                if let Some(rest) = line.to_ascii_lowercase().strip_prefix("content-length:") {
                    content_length = rest.trim().parse().unwrap_or(0);
                }
                if line == "\r\n" || line.is_empty() {
                    break;
                }
            }
            let mut body = vec![0u8; content_length];
            let _ = reader.read_exact(&mut body);
            // the request must be the documented chat-completions shape
            let request: serde_json::Value = serde_json::from_slice(&body).unwrap();
            assert!(request["model"].is_string());
            assert_eq!(request["messages"][0]["role"], "user");
            assert!(request["messages"][0]["content"].is_string());
            assert!(request["temperature"].is_number());
            assert!(request["max_tokens"].is_number());
            let reply = serde_json::json!({
                "choices": [{"message": {"role": "assistant", "content": reply_content}}]
            })
            .to_string();
            let response = format!(
                "HTTP/1.1 200 OK\r\ncontent-type: application/json\r\ncontent-length: {}\r\nconnection: close\r\n\r\n{reply}",
                reply.len()
            );
            let _ = stream.write_all(response.as_bytes());
        }
    });
    format!("http://{addr}")
}

#[test]
fn criterion_9_live_endpoint_smoke_run() {
    let url = spawn_chat_completions_server("1. 42");
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("smoke.toml"),
        format!(
            r#"datasets = [
    "{fixtures}/datasets/gsm8k.jsonl",
    "{fixtures}/datasets/svamp.jsonl",
]
languages = ["bug_Latn", "kaz_Cyrl"]
strategies = ["standard"]
lexicon_dir = "{fixtures}/lexicons"
out_dir = "out"
max_concurrency = 2

[provider]
kind = "http"
url = "{url}"
model = "smoke-model"
"#,
            fixtures = fixtures().display(),
        ),
    )
    .unwrap();

    let out_dir = dir.path().join("out");
    let output = std::process::Command::new(env!("CARGO_BIN_EXE_dip"))
        .arg("run")
        .arg("--config")
        .arg(dir.path().join("smoke.toml"))
        .arg("--out-dir")
        .arg(&out_dir)
        .output()
        .unwrap();
    assert_eq!(
        output.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );

    let records = std::fs::read_to_string(out_dir.join("records.jsonl")).unwrap();
    let records: Vec<RunRecord> = records
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(records.len(), 12, "12 items x 1 strategy");
    assert!(records
        .iter()
        .all(|r| r.parsed.answer == Answer::numeric(42.0)));
    assert!(out_dir.join("table.txt").exists());
    println!("ACCEPTANCE 9 (chat-completions endpoint smoke run, no code changes): PASS");
}
