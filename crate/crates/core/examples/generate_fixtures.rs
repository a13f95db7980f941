//! Regenerates everything under fixtures/: the bundled benchmark items,
//! lexicons, replay transcripts, dictionary-construction transcripts, prompt
//! goldens, and the pinned offline-run outputs.
//!
//!     cargo run -p dip-core --example generate_fixtures
//!
//! The replay store keys depend on the prompt templates; rerun this after
//! any template change and review the resulting fixture diff.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};

use dip_core::datasets::{load_dataset, BenchmarkItem, DatasetKind};
use dip_core::harness::{run_matrix, write_run_outputs};
use dip_core::lexicon::{lexicon_to_jsonl, DuplicatePolicy, Lexicon, LexiconEntry};
use dip_core::llm::{
    cache_key, replay_records_to_jsonl, CompletionParams, LlmClient, ReplayProvider, ReplayRecord,
};
use dip_core::prompts::{build_prompt, PromptStrategy};

fn fixtures_root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn write(path: &Path, content: &str) {
    fs::create_dir_all(path.parent().unwrap()).unwrap();
    fs::write(path, content).unwrap();
    println!("wrote {}", path.display());
}

// ---------------------------------------------------------------------------
// fixture vocabulary: English word -> source-language word(s)
// ---------------------------------------------------------------------------

struct FixtureLanguage {
    code: &'static str,
    vocab: Vec<(&'static str, &'static str)>,
    /// source surface -> richer gloss than the plain vocabulary word
    gloss_overrides: Vec<(&'static str, &'static str)>,
}

fn bug_latn() -> FixtureLanguage {
    FixtureLanguage {
        code: "bug_Latn",
        vocab: vec![
            ("has", "engka"),
            ("apples", "taropo"),
            ("he", "ia"),
            ("buys", "melli"),
            ("more", "lebbi"),
            ("how", "pekkugi aga"),
            ("many", "maega"),
            ("does", "naulle"),
            ("have", "appunna"),
            ("now", "makkukua"),
            ("a", "se"),
            ("one", "seddi"),
            ("farmer", "pagalung"),
            ("sells", "mabbalu"),
            ("baskets", "bakue"),
            ("each", "tungke"),
            ("basket", "baku"),
            ("holds", "mattaro"),
            ("fish", "bale"),
            ("sell", "balu"),
            ("coins", "doi"),
            ("she", "iya"),
            ("gives", "mabbere"),
            ("to", "lao"),
            ("her", "na"),
            ("brother", "anrinna"),
            ("remain", "monro"),
            ("shop", "warung"),
            ("books", "kitta"),
            ("it", "iaro"),
            ("receives", "tarima"),
            ("the", "ri"),
            ("there", "kua"),
            ("are", "engkai"),
            ("birds", "manu"),
            ("on", "yasé"),
            ("tree", "aju"),
            ("fly", "luttu"),
            ("away", "salai"),
            ("bags", "tase"),
            ("bag", "tasé"),
            ("costs", "angke"),
            ("pay", "waja"),
            ("train", "kareta"),
            ("travels", "joppa"),
            ("miles", "mila"),
            ("in", "nalaleng"),
            ("hour", "tetté"),
            ("hours", "tetteé"),
            ("if", "rekko"),
            ("workers", "pajama"),
            ("build", "patettong"),
            ("walls", "renring"),
            ("days", "esso"),
            ("do", "pogau"),
            ("what", "aga"),
            ("is", "iyanaritu"),
            ("sum", "jumella"),
            ("of", "pole"),
            ("two", "duwa"),
            ("numbers", "nomoro"),
            ("and", "sibawa"),
            ("their", "mennang"),
            ("difference", "assisalang"),
            ("larger", "lebbiloppo"),
            ("number", "angka"),
            ("yesterday", "sangadi"),
            ("was", "engkana"),
            ("date", "tanggala"),
            ("today", "iyaé"),
            ("last", "paccappureng"),
            ("day", "essoé"),
            ("tomorrow", "baja"),
            ("meeting", "addeppungeng"),
            ("ago", "labeé"),
            ("goalkeeper", "pajjaga"),
            ("scored", "mallolongeng"),
            ("touchdown", "pattuju"),
            ("football", "raga"),
            ("match", "appasiunoreng"),
            ("striker", "pakkanna"),
            ("kicked", "majjeka"),
            ("ball", "bola"),
            ("into", "muttama"),
            ("net", "jala"),
            ("swimmer", "pannange"),
            ("dribbled", "maggolek"),
            ("down", "nok"),
            ("court", "lapangan"),
            ("options", "pilihan"),
        ],
        gloss_overrides: vec![("jala", "net (goal)")],
    }
}

fn kaz_cyrl() -> FixtureLanguage {
    FixtureLanguage {
        code: "kaz_Cyrl",
        vocab: vec![
            ("has", "бар"),
            ("apples", "алмалар"),
            ("he", "ол"),
            ("buys", "сатып алады"),
            ("more", "тағы"),
            ("how", "қанша"),
            ("many", "көп"),
            ("does", "істейді"),
            ("have", "иеленеді"),
            ("now", "қазір"),
            ("a", "бір"),
            ("one", "бірінші"),
            ("farmer", "диқан"),
            ("sells", "сатады"),
            ("baskets", "себеттер"),
            ("each", "әрбір"),
            ("basket", "себет"),
            ("holds", "сыйдырады"),
            ("fish", "балық"),
            ("sell", "сату"),
            ("coins", "тиындар"),
            ("she", "әйел"),
            ("gives", "береді"),
            ("to", "үшін"),
            ("her", "оның"),
            ("brother", "інісіне"),
            ("remain", "қалады"),
            ("shop", "дүкен"),
            ("books", "кітаптар"),
            ("it", "бұл"),
            ("receives", "қабылдайды"),
            ("the", "сол"),
            ("there", "анда"),
            ("are", "болады"),
            ("birds", "құстар"),
            ("on", "үстінде"),
            ("tree", "ағаш"),
            ("fly", "ұшады"),
            ("away", "алысқа"),
            ("bags", "сөмкелер"),
            ("bag", "сөмке"),
            ("costs", "тұрады"),
            ("pay", "төлейді"),
            ("train", "пойыз"),
            ("travels", "жүреді"),
            ("miles", "миля"),
            ("in", "ішінде"),
            ("hour", "сағат"),
            ("hours", "сағаттар"),
            ("if", "егер"),
            ("workers", "жұмысшылар"),
            ("build", "салады"),
            ("walls", "қабырғалар"),
            ("days", "күндер"),
            ("do", "жасайды"),
            ("what", "қандай"),
            ("is", "болып"),
            ("sum", "қосынды"),
            ("of", "туралы"),
            ("two", "екі"),
            ("numbers", "сандар"),
            ("and", "және"),
            ("their", "олардың"),
            ("difference", "айырма"),
            ("larger", "үлкенірек"),
            ("number", "сан"),
            ("yesterday", "кеше"),
            ("was", "болды"),
            ("date", "дата"),
            ("today", "бүгін"),
            ("last", "соңғы"),
            ("day", "күн"),
            ("tomorrow", "ертең күні"),
            ("meeting", "жиналыс"),
            ("ago", "бұрын"),
            ("goalkeeper", "қақпашы"),
            ("scored", "соқты"),
            ("touchdown", "тачдаун"),
            ("football", "футбол"),
            ("match", "матч"),
            ("striker", "шабуылшы"),
            ("kicked", "тепті"),
            ("ball", "доп"),
            ("into", "ішіне"),
            ("net", "тор"),
            ("swimmer", "жүзуші"),
            ("dribbled", "алып жүрді"),
            ("down", "бойымен"),
            ("court", "алаң"),
            ("options", "нұсқалар"),
        ],
        gloss_overrides: vec![("тор", "net (goal net)")],
    }
}

impl FixtureLanguage {
    fn lookup(&self, english: &str) -> Option<&'static str> {
        self.vocab
            .iter()
            .find(|(en, _)| *en == english)
            .map(|(_, src)| *src)
    }

    /// Word-by-word rendering of an English sentence into the fixture
    /// language. Numbers, labels, and unknown words pass through.
    fn render(&self, english: &str) -> String {
        let mut out: Vec<String> = Vec::new();
        for token in english.split_whitespace() {
            let stripped_lead = token.trim_start_matches(['(', '"']);
            let lead = &token[..token.len() - stripped_lead.len()];
            let core_full = stripped_lead.trim_end_matches(['.', ',', '?', '!', ':', ';', ')', '"']);
            let trail = &stripped_lead[core_full.len()..];
            let is_protected = core_full.chars().count() == 1
                && core_full.chars().all(|c| c.is_ascii_uppercase());
            let mapped = if core_full.is_empty() || is_protected {
                core_full.to_string()
            } else {
                match self.lookup(&core_full.to_lowercase()) {
                    Some(src) => src.to_string(),
                    None => core_full.to_string(),
                }
            };
            out.push(format!("{lead}{mapped}{trail}"));
        }
        let mut text = out.join(" ");
        if let Some(first) = text.chars().next() {
            let upper: String = first.to_uppercase().collect();
            text = format!("{upper}{}", &text[first.len_utf8()..]);
        }
        text
    }

    fn lexicon_entries(&self) -> Vec<LexiconEntry> {
        let overrides: HashMap<&str, &str> = self.gloss_overrides.iter().copied().collect();
        self.vocab
            .iter()
            .map(|(en, src)| {
                let gloss = overrides.get(src).copied().unwrap_or(en);
                LexiconEntry::new(src, gloss).unwrap()
            })
            .collect()
    }
}

// ---------------------------------------------------------------------------
// fixture questions
// ---------------------------------------------------------------------------

enum Gold {
    Number(i64),
    Label(&'static str, &'static [(&'static str, &'static str)]),
    Plausible(bool),
}

struct Template {
    dataset: DatasetKind,
    english: &'static str,
    gold: Gold,
    rationale: Option<&'static str>,
}

fn templates() -> Vec<Template> {
    use DatasetKind::*;
    vec![
        Template {
            dataset: Gsm8k,
            english: "Tariq has 12 apples. He buys 7 more apples. How many apples does he have now?",
            gold: Gold::Number(19),
            rationale: Some("He starts with 12 apples and buys 7 more, so 12 + 7 = 19."),
        },
        Template {
            dataset: Gsm8k,
            english: "One farmer sells 45 baskets. Each basket holds 30 fish. How many fish does he sell?",
            gold: Gold::Number(1350),
            rationale: Some("45 baskets times 30 fish is 45 * 30 = 1350."),
        },
        Template {
            dataset: Gsm8k,
            english: "Lala has 60 coins. She gives 24 coins to her brother. How many coins remain?",
            gold: Gold::Number(36),
            rationale: Some("60 minus 24 leaves 60 - 24 = 36 coins."),
        },
        Template {
            dataset: Svamp,
            english: "One shop has 28 books. It receives 14 more books. How many books does the shop have?",
            gold: Gold::Number(42),
            rationale: Some("28 plus 14 is 28 + 14 = 42 books."),
        },
        Template {
            dataset: Svamp,
            english: "There are 50 birds on a tree. 18 birds fly away. How many birds remain?",
            gold: Gold::Number(32),
            rationale: Some("50 minus 18 is 50 - 18 = 32 birds."),
        },
        Template {
            dataset: Svamp,
            english: "Nina buys 6 bags. Each bag costs 9 coins. How many coins does she pay?",
            gold: Gold::Number(54),
            rationale: Some("6 bags at 9 coins each is 6 * 9 = 54 coins."),
        },
        Template {
            dataset: Aqua,
            english: "One train travels 30 miles in one hour. How many miles does it travel in 4 hours? Options: A) 90 B) 120 C) 150 D) 60 E) 30",
            gold: Gold::Label(
                "B",
                &[
                    ("A", "90"),
                    ("B", "120"),
                    ("C", "150"),
                    ("D", "60"),
                    ("E", "30"),
                ],
            ),
            rationale: None,
        },
        Template {
            dataset: Aqua,
            english: "If 5 workers build 5 walls in 5 days, how many walls do 10 workers build in 5 days? Options: A) 5 B) 15 C) 10 D) 20 E) 25",
            gold: Gold::Label(
                "C",
                &[
                    ("A", "5"),
                    ("B", "15"),
                    ("C", "10"),
                    ("D", "20"),
                    ("E", "25"),
                ],
            ),
            rationale: None,
        },
        Template {
            dataset: Aqua,
            english: "The sum of two numbers is 20 and their difference is 4. What is the larger number? Options: A) 8 B) 10 C) 14 D) 12 E) 16",
            gold: Gold::Label(
                "D",
                &[
                    ("A", "8"),
                    ("B", "10"),
                    ("C", "14"),
                    ("D", "12"),
                    ("E", "16"),
                ],
            ),
            rationale: None,
        },
        Template {
            dataset: Date,
            english: "Yesterday was 2014-03-05. What is the date today? Options: A) 2014-03-06 B) 2014-03-05 C) 2014-02-05 D) 2014-03-07",
            gold: Gold::Label(
                "A",
                &[
                    ("A", "2014-03-06"),
                    ("B", "2014-03-05"),
                    ("C", "2014-02-05"),
                    ("D", "2014-03-07"),
                ],
            ),
            rationale: None,
        },
        Template {
            dataset: Date,
            english: "Today is the last day of 2020. What is the date tomorrow? Options: A) 2020-12-30 B) 2021-01-01 C) 2020-01-01 D) 2021-12-31",
            gold: Gold::Label(
                "B",
                &[
                    ("A", "2020-12-30"),
                    ("B", "2021-01-01"),
                    ("C", "2020-01-01"),
                    ("D", "2021-12-31"),
                ],
            ),
            rationale: None,
        },
        Template {
            dataset: Date,
            english: "The meeting was 10 days ago, on 2019-06-10. What is the date today? Options: A) 2019-06-15 B) 2019-06-10 C) 2019-06-20 D) 2019-07-20",
            gold: Gold::Label(
                "C",
                &[
                    ("A", "2019-06-15"),
                    ("B", "2019-06-10"),
                    ("C", "2019-06-20"),
                    ("D", "2019-07-20"),
                ],
            ),
            rationale: None,
        },
        Template {
            dataset: Sports,
            english: "The goalkeeper scored a touchdown in the football match.",
            gold: Gold::Plausible(false),
            rationale: None,
        },
        Template {
            dataset: Sports,
            english: "The striker kicked the ball into the net.",
            gold: Gold::Plausible(true),
            rationale: None,
        },
        Template {
            dataset: Sports,
            english: "The swimmer dribbled the ball down the court.",
            gold: Gold::Plausible(false),
            rationale: None,
        },
    ]
}

fn dataset_lines(language: &FixtureLanguage) -> HashMap<DatasetKind, Vec<String>> {
    let mut per_dataset: HashMap<DatasetKind, Vec<String>> = HashMap::new();
    let mut index_per_dataset: HashMap<DatasetKind, usize> = HashMap::new();
    for template in templates() {
        let index = index_per_dataset.entry(template.dataset).or_insert(0);
        *index += 1;
        let id = format!("{}-{}-{}", template.dataset.name(), language.code, index);
        let question = language.render(template.english);
        let mut object = serde_json::json!({
            "id": id,
            "dataset": template.dataset.name(),
            "language": language.code,
            "question": question,
            "english_question": template.english,
        });
        let map = object.as_object_mut().unwrap();
        match &template.gold {
            Gold::Number(value) => {
                map.insert("answer_type".into(), "numeric".into());
                map.insert("gold".into(), (*value).into());
            }
            Gold::Label(gold, choices) => {
                map.insert("answer_type".into(), "choice".into());
                map.insert("gold".into(), (*gold).into());
                let choices: Vec<serde_json::Value> = choices
                    .iter()
                    .map(|(label, text)| serde_json::json!({"label": label, "text": text}))
                    .collect();
                map.insert("choices".into(), choices.into());
            }
            Gold::Plausible(ok) => {
                map.insert("answer_type".into(), "boolean".into());
                map.insert(
                    "gold".into(),
                    if *ok { "plausible" } else { "implausible" }.into(),
                );
            }
        }
        if let Some(rationale) = template.rationale {
            map.insert("gold_rationale".into(), rationale.into());
        }
        per_dataset
            .entry(template.dataset)
            .or_default()
            .push(serde_json::to_string(&object).unwrap());
    }
    per_dataset
}

// ---------------------------------------------------------------------------
// scripted replay responses
// ---------------------------------------------------------------------------

fn format_number(value: f64) -> String {
    let as_int = value as i64;
    if value == as_int as f64 && as_int.abs() >= 1000 {
        // insert thousands separators
        let digits = as_int.abs().to_string();
        let mut grouped = String::new();
        for (i, c) in digits.chars().enumerate() {
            if i > 0 && (digits.len() - i).is_multiple_of(3) {
                grouped.push(',');
            }
            grouped.push(c);
        }
        if as_int < 0 {
            format!("-{grouped}")
        } else {
            grouped
        }
    } else if value == as_int as f64 {
        as_int.to_string()
    } else {
        value.to_string()
    }
}

fn answer_value(item: &BenchmarkItem, correct: bool) -> String {
    use dip_core::answer::{Answer, Plausibility};
    match &item.gold {
        Answer::Numeric { value } => {
            let value = if correct { *value } else { *value + 1.0 };
            format_number(value)
        }
        Answer::Choice { label } => {
            if correct {
                label.clone()
            } else {
                let labels: Vec<&str> = item
                    .choices
                    .as_ref()
                    .unwrap()
                    .iter()
                    .map(|c| c.label.as_str())
                    .collect();
                let at = labels.iter().position(|l| l == label).unwrap();
                labels[(at + 1) % labels.len()].to_string()
            }
        }
        Answer::Boolean { value } => {
            let verdict = match (value, correct) {
                (Plausibility::Plausible, true) | (Plausibility::Implausible, false) => {
                    "plausible"
                }
                _ => "implausible",
            };
            verdict.to_string()
        }
        Answer::Unparseable => unreachable!("gold answers are always typed"),
    }
}

fn answer_line(item: &BenchmarkItem, correct: bool, j: usize) -> String {
    let value = answer_value(item, correct);
    match j % 3 {
        0 => value,
        1 => format!("{value}."),
        _ => format!("The final answer is {value}"),
    }
}

/// Truncated word prefix, used to degrade baseline translations.
fn rough_translation(english: &str) -> String {
    let words: Vec<&str> = english.split_whitespace().collect();
    let keep = (words.len() * 7).div_ceil(10).max(1);
    words[..keep].join(" ")
}

fn reasoning_text(item: &BenchmarkItem, faithful: bool) -> String {
    match (&item.gold_rationale, faithful) {
        (Some(rationale), true) => rationale.clone(),
        (Some(rationale), false) => rough_translation(rationale),
        (None, _) => match item.dataset {
            DatasetKind::Aqua => "Comparing the options step by step gives the result.".to_string(),
            DatasetKind::Date => "Counting the days forward gives the result.".to_string(),
            _ => "The sentence describes one sport consistently.".to_string(),
        },
    }
}

/// Whether the scripted model answers (item j, strategy) correctly. The
/// patterns give each strategy a distinct accuracy profile, with the
/// annotated full pipeline always right and the cross-lingual baseline
/// always wrong.
fn is_correct(strategy: PromptStrategy, j: usize) -> bool {
    match strategy {
        PromptStrategy::Standard => j.is_multiple_of(3),
        PromptStrategy::NonInsertion => j % 3 == 1,
        PromptStrategy::EnglishPivot => j.is_multiple_of(2),
        PromptStrategy::EnglishPivotThought => !j.is_multiple_of(3),
        PromptStrategy::CrossLingualThought => false,
        PromptStrategy::DipNoEpNoCt => j % 2 == 1,
        PromptStrategy::DipEpNoCt => j % 3 != 1,
        PromptStrategy::DipFull => true,
    }
}

fn respond(item: &BenchmarkItem, strategy: PromptStrategy, j: usize) -> String {
    let correct = is_correct(strategy, j);
    let english = item.english_question.as_deref().unwrap_or_default();
    let answer = answer_line(item, correct, j);
    match strategy {
        PromptStrategy::Standard | PromptStrategy::NonInsertion | PromptStrategy::DipNoEpNoCt => {
            match j % 3 {
                0 => format!("1. {answer}"),
                1 => format!("1: {answer}"),
                _ => answer,
            }
        }
        PromptStrategy::EnglishPivot => {
            format!("1. {}\n2. {answer}", rough_translation(english))
        }
        PromptStrategy::DipEpNoCt => {
            format!("1. {english}\n2. {answer}")
        }
        PromptStrategy::EnglishPivotThought => {
            format!(
                "1. {}\n2. {}\n3. {answer}",
                rough_translation(english),
                reasoning_text(item, false)
            )
        }
        PromptStrategy::DipFull => {
            format!("1. {english}\n2. {}\n3. {answer}", reasoning_text(item, true))
        }
        PromptStrategy::CrossLingualThought => {
            if j == 1 {
                "I cannot determine the answer.".to_string()
            } else {
                format!("1. Thinking in English about the question.\n2. {answer}")
            }
        }
    }
}

// ---------------------------------------------------------------------------
// dictionary-construction transcripts
// ---------------------------------------------------------------------------

struct TranscriptPool {
    code: &'static str,
    pairs: Vec<(&'static str, &'static str)>,
}

fn transcript_pools() -> Vec<TranscriptPool> {
    let from_vocab = |lang: FixtureLanguage, take: usize| {
        lang.vocab
            .iter()
            .filter(|(_, src)| !src.contains(' '))
            .take(take)
            .map(|(en, src)| (*src, *en))
            .collect::<Vec<_>>()
    };
    vec![
        TranscriptPool {
            code: "bug_Latn",
            pairs: from_vocab(bug_latn(), 10),
        },
        TranscriptPool {
            code: "kaz_Cyrl",
            pairs: from_vocab(kaz_cyrl(), 10),
        },
        TranscriptPool {
            code: "srp_Cyrl",
            pairs: vec![
                ("књига", "book"),
                ("вода", "water"),
                ("дан", "day"),
                ("кућа", "house"),
                ("пут", "road"),
                ("дрво", "tree"),
                ("велики", "big"),
                ("мали", "small"),
                ("врата", "door"),
                ("планина", "mountain"),
            ],
        },
        TranscriptPool {
            code: "azb_Arab",
            pairs: vec![
                ("کیتاب", "book"),
                ("سو", "water"),
                ("گون", "day"),
                ("ائو", "house"),
                ("یول", "road"),
                ("آغاج", "tree"),
                ("بؤیوک", "big"),
                ("کیچیک", "small"),
                ("قاپی", "door"),
                ("داغ", "mountain"),
            ],
        },
        TranscriptPool {
            code: "asm_Beng",
            pairs: vec![
                ("কিতাপ", "book"),
                ("পানী", "water"),
                ("দিন", "day"),
                ("ঘৰ", "house"),
                ("বাট", "road"),
                ("গছ", "tree"),
                ("ডাঙৰ", "big"),
                ("সৰু", "small"),
                ("দুৱাৰ", "door"),
                ("পাহাৰ", "mountain"),
            ],
        },
    ]
}

fn build_dict_transcripts() -> (String, String) {
    let mut transcript_lines = Vec::new();
    let mut expected = Vec::new();
    for pool in transcript_pools() {
        for t in 0..10 {
            let count = 3 + t % 3;
            let mut pairs: Vec<(String, String)> = (0..count)
                .map(|k| {
                    let (src, gloss) = pool.pairs[(t + k) % pool.pairs.len()];
                    (src.to_string(), gloss.to_string())
                })
                .collect();
            if t % 4 == 0 {
                // merge the first two into one multi-word entry
                let (s2, g2) = pairs.remove(1);
                let (s1, g1) = pairs.remove(0);
                pairs.insert(0, (format!("{s1} {s2}"), format!("{g1} {g2}")));
            }
            let source_sentence = pairs
                .iter()
                .map(|(s, _)| s.as_str())
                .collect::<Vec<_>>()
                .join(" ");
            let english_sentence = pairs
                .iter()
                .map(|(_, g)| g.as_str())
                .collect::<Vec<_>>()
                .join(" ");
            let mut dictionary = pairs
                .iter()
                .map(|(s, g)| format!("{s} ({g})"))
                .collect::<Vec<_>>()
                .join(" ");
            if t % 3 == 1 {
                dictionary.push_str(" .");
            }
            let raw = format!(
                "English: {english_sentence}.\n{}: {source_sentence}.\ndictionary: {dictionary}",
                pool.code
            );
            transcript_lines.push(
                serde_json::to_string(&serde_json::json!({
                    "language": pool.code,
                    "raw": raw,
                }))
                .unwrap(),
            );
            expected.push(serde_json::json!({
                "language": pool.code,
                "entries": pairs
                    .iter()
                    .map(|(s, g)| serde_json::json!({"source": s, "gloss": g}))
                    .collect::<Vec<_>>(),
            }));
        }
    }
    (
        format!("{}\n", transcript_lines.join("\n")),
        format!(
            "{}\n",
            serde_json::to_string_pretty(&serde_json::Value::Array(expected)).unwrap()
        ),
    )
}

// ---------------------------------------------------------------------------

fn main() {
    let root = fixtures_root();
    let languages = [bug_latn(), kaz_cyrl()];

    // lexicons
    let mut lexicons: HashMap<String, Lexicon> = HashMap::new();
    for language in &languages {
        let lexicon = Lexicon::from_entries(
            language.code,
            language.lexicon_entries(),
            DuplicatePolicy::Reject,
        )
        .expect("fixture vocab has no duplicate source words");
        write(
            &root.join(format!("lexicons/{}.jsonl", language.code)),
            &lexicon_to_jsonl(&lexicon),
        );
        lexicons.insert(language.code.to_string(), lexicon);
    }

    // datasets
    let mut per_dataset: HashMap<DatasetKind, Vec<String>> = HashMap::new();
    for language in &languages {
        for (dataset, lines) in dataset_lines(language) {
            per_dataset.entry(dataset).or_default().extend(lines);
        }
    }
    let mut items: Vec<BenchmarkItem> = Vec::new();
    for (dataset, lines) in &per_dataset {
        let path = root.join(format!("datasets/{}.jsonl", dataset.name()));
        write(&path, &format!("{}\n", lines.join("\n")));
        items.extend(load_dataset(&path).expect("generated fixture items validate"));
    }

    // replay transcripts: one response per (item, strategy)
    let params = CompletionParams::new("fixture-model");
    let mut records = Vec::new();
    for item in &items {
        let j: usize = item
            .id
            .rsplit('-')
            .next()
            .unwrap()
            .parse::<usize>()
            .unwrap()
            - 1;
        for strategy in PromptStrategy::ALL {
            let lexicon = strategy
                .uses_lexicon()
                .then(|| &lexicons[&item.language]);
            let prompt = build_prompt(strategy, item, lexicon).unwrap();
            records.push(ReplayRecord {
                key: cache_key("replay", &params, &prompt.text),
                raw_text: respond(item, strategy, j),
            });
        }
    }
    records.sort_by(|a, b| a.key.cmp(&b.key));
    write(
        &root.join("replay/transcripts.jsonl"),
        &replay_records_to_jsonl(&records),
    );

    // prompt goldens for a fixed item
    let golden_item = items
        .iter()
        .find(|i| i.id == "gsm8k-bug_Latn-1")
        .expect("fixture item exists");
    for strategy in PromptStrategy::ALL {
        let lexicon = strategy
            .uses_lexicon()
            .then(|| &lexicons[&golden_item.language]);
        let prompt = build_prompt(strategy, golden_item, lexicon).unwrap();
        write(
            &root.join(format!("goldens/prompts/{}.txt", strategy.name())),
            &prompt.text,
        );
    }

    // pinned offline run outputs
    let provider = ReplayProvider::from_records(records.iter().cloned());
    let client = LlmClient::new(Box::new(provider), None);
    let run_records = run_matrix(
        &items,
        &PromptStrategy::ALL,
        &lexicons,
        &client,
        &params,
        4,
    )
    .expect("fixture run succeeds");
    write_run_outputs(&root.join("goldens/run"), &run_records).expect("outputs write");
    println!("wrote {}", root.join("goldens/run").display());

    // dictionary-construction transcripts and their expected entries
    let (transcripts, expected) = build_dict_transcripts();
    write(&root.join("dict_transcripts/transcripts.jsonl"), &transcripts);
    write(&root.join("dict_transcripts/expected.json"), &expected);

    // offline run configuration
    write(
        &root.join("run_config.toml"),
        r#"datasets = [
    "datasets/gsm8k.jsonl",
    "datasets/svamp.jsonl",
    "datasets/aqua.jsonl",
    "datasets/date.jsonl",
    "datasets/sports.jsonl",
]
languages = ["bug_Latn", "kaz_Cyrl"]
strategies = [
    "standard",
    "non-insertion",
    "english-pivot",
    "english-pivot-thought",
    "cross-lingual-thought",
    "dip-no-ep-no-ct",
    "dip-ep-no-ct",
    "dip",
]
lexicon_dir = "lexicons"
out_dir = "out"
max_concurrency = 4

[provider]
kind = "replay"
model = "fixture-model"
replay_path = "replay/transcripts.jsonl"
"#,
    );
}
