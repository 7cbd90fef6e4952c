use std::fmt::Write as _;
use std::fs;
use std::io::{self, Read};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Subcommand, ValueEnum};
use kolmo::cluster::upgma;
use kolmo::coding::{
    huffman_build, pair_pack_len, pair_pack_unary, pair_unpack_len, pair_unpack_unary, CodingError,
    FrequencyTable, PrefixCode,
};
use kolmo::compress::{builtin, CodecError, Compressor, ExternalCodec, ProcessSlots, SizeCache};
use kolmo::corpus::load_corpus;
use kolmo::entropy::{enum_decode, enum_encode, entropy_of_counts, EntropyError};
use kolmo::matrix::format_value;
use kolmo::ncd::{distance_matrix, metric_report, ncd, raw_distance_matrix, NcdError, NcdOptions};
use kolmo::ngd::{ngd, ngd_matrix, HitIndex, NgdError};
use kolmo::randomness::{census, parse_rational, test_by_name, RandomnessError};
use kolmo::toyk::{k_exact_with_limit, upper_bound_trace};
use kolmo::{BitString, DistanceMatrix};
use serde_json::json;

use crate::config::{Format, ToolkitConfig};
use crate::Failure;

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Shannon entropy (bits per symbol) of a count vector or a text
    Entropy {
        /// Comma-separated symbol counts
        #[arg(long, value_delimiter = ',', conflicts_with = "text")]
        counts: Option<Vec<u64>>,
        /// Count the characters of this text instead
        #[arg(long)]
        text: Option<String>,
    },
    /// Huffman code for a count vector or for the characters of a text
    Huffman {
        #[arg(long, value_delimiter = ',', conflicts_with = "text")]
        counts: Option<Vec<u64>>,
        /// Also prints the encoding of this text
        #[arg(long)]
        text: Option<String>,
    },
    /// Enumerative (class + rank) code over a character alphabet
    Enumcode {
        /// Word to encode, or bits to decode with --decode
        input: String,
        /// Symbols in order (default: sorted distinct characters of the input)
        #[arg(long)]
        alphabet: Option<String>,
        #[arg(long, requires = "alphabet")]
        decode: bool,
    },
    /// Self-delimiting packing of bit strings
    Pack {
        #[arg(long, value_enum, default_value = "len")]
        scheme: Scheme,
        /// Parts to pack, or the packed string with --unpack
        #[arg(required = true)]
        parts: Vec<String>,
        #[arg(long, default_value = "")]
        tail: String,
        /// Unpack this many parts from the single argument
        #[arg(long)]
        unpack: Option<usize>,
    },
    /// Normalized compression distance between two files
    Ncd {
        #[arg(long, default_value = "huff0")]
        codec: String,
        #[arg(long)]
        clamp: bool,
        x: PathBuf,
        y: PathBuf,
    },
    /// NCD matrix over every file in a directory
    Matrix {
        #[arg(long, default_value = "huff0")]
        codec: String,
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        clamp: bool,
        /// Keep ordered-pair values instead of symmetrizing
        #[arg(long)]
        raw: bool,
        /// Print metric diagnostics to stderr
        #[arg(long)]
        report: bool,
    },
    /// UPGMA tree from a distance matrix (JSON or CSV) on stdin
    Cluster {
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, conflicts_with = "json")]
        newick: bool,
        #[arg(long)]
        json: bool,
    },
    /// Deepest critical level of a statistical test containing a string
    Mltest {
        #[arg(long)]
        test: String,
        #[arg(long)]
        alpha: Option<String>,
        bits: String,
    },
    /// Exact level proportions of a test over all strings of length n
    Census {
        #[arg(long)]
        test: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        max_level: Option<usize>,
        #[arg(long)]
        alpha: Option<String>,
    },
    /// Approximation-from-above trace and exact value on the toy machine
    Toyk {
        bits: String,
        /// Longest program considered by the trace (default |x| + 1)
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Build a document index from a directory of text files
    NgdIndex {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Normalized Google distance between two terms
    Ngd {
        #[arg(long)]
        index: PathBuf,
        x: String,
        y: String,
    },
    /// NGD matrix over a list of terms
    NgdMatrix {
        #[arg(long)]
        index: PathBuf,
        #[arg(required = true)]
        terms: Vec<String>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scheme {
    Unary,
    Len,
}

impl From<CodecError> for Failure {
    fn from(e: CodecError) -> Self {
        match e {
            CodecError::External { .. } => Failure::External(e.to_string()),
            CodecError::UnknownCodec(_) => Failure::Usage(e.to_string()),
            _ => Failure::Data(e.to_string()),
        }
    }
}

impl From<NcdError> for Failure {
    fn from(e: NcdError) -> Self {
        let mut inner = &e;
        while let NcdError::Pair(_, _, boxed) = inner {
            inner = boxed;
        }
        match inner {
            NcdError::Codec(c) => match Failure::from(c.clone()) {
                Failure::Data(_) => Failure::Data(e.to_string()),
                Failure::Usage(_) => Failure::Usage(e.to_string()),
                Failure::External(_) => Failure::External(e.to_string()),
            },
            _ => Failure::Data(e.to_string()),
        }
    }
}

impl From<RandomnessError> for Failure {
    fn from(e: RandomnessError) -> Self {
        match e {
            RandomnessError::UnknownTest(_) => Failure::Usage(e.to_string()),
            RandomnessError::Codec(c) => c.into(),
            _ => Failure::Data(e.to_string()),
        }
    }
}

fn data(e: impl ToString) -> Failure {
    Failure::Data(e.to_string())
}

impl From<CodingError> for Failure {
    fn from(e: CodingError) -> Self {
        data(e)
    }
}

impl From<EntropyError> for Failure {
    fn from(e: EntropyError) -> Self {
        data(e)
    }
}

impl From<NgdError> for Failure {
    fn from(e: NgdError) -> Self {
        data(e)
    }
}

fn read_file(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| data(format!("{}: {e}", path.display())))
}

fn parse_bits(text: &str) -> Result<BitString, Failure> {
    text.parse().map_err(|e| data(format!("{e}")))
}

fn resolve_codec(name: &str, config: &ToolkitConfig) -> Result<Arc<dyn Compressor>, Failure> {
    if let Ok(c) = builtin(name) {
        return Ok(c);
    }
    let spec = config
        .codecs
        .iter()
        .find(|c| c.name == name)
        .ok_or_else(|| Failure::Usage(format!("unknown codec {name:?}")))?;
    let slots = Arc::new(ProcessSlots::new(config.workers));
    Ok(Arc::new(ExternalCodec::with_slots(spec.clone(), slots)))
}

fn char_table(text: &str) -> FrequencyTable<char> {
    let chars: Vec<char> = text.chars().collect();
    FrequencyTable::from_word(&chars)
}

fn json_line(v: serde_json::Value) -> String {
    format!("{v}\n")
}

fn render_matrix(m: &DistanceMatrix, format: Format) -> String {
    match format {
        Format::Json => format!("{}\n", m.to_json()),
        // text stays CSV so `matrix | cluster` works without flags
        Format::Csv | Format::Text => m.to_csv(),
    }
}

fn code_output<S: Ord + Clone + std::fmt::Display>(
    code: &PrefixCode<S>,
    word: Option<&[S]>,
    format: Format,
) -> Result<String, Failure> {
    let encoded = word.map(|w| code.encode(w)).transpose()?;
    Ok(match format {
        Format::Json => {
            let mut v = json!({ "code": code.to_json() });
            if let Some(bits) = &encoded {
                v["encoded"] = json!(bits.to_string());
                v["bits"] = json!(bits.len());
            }
            json_line(v)
        }
        Format::Csv | Format::Text => {
            let sep = if format == Format::Csv { "," } else { "\t" };
            let mut out = String::new();
            for (s, w) in code.alphabet().iter().zip(code.codewords()) {
                let _ = writeln!(out, "{s}{sep}{w}");
            }
            if let Some(bits) = &encoded {
                let _ = writeln!(out, "encoded{sep}{bits}{sep}{}", bits.len());
            }
            out
        }
    })
}

pub fn execute(command: Command, config: &ToolkitConfig) -> Result<String, Failure> {
    let format = config.format;
    match command {
        Command::Entropy { counts, text } => {
            let counts = match (counts, text) {
                (Some(c), _) => c,
                (None, Some(t)) => char_table(&t).iter().map(|(_, c)| c).collect(),
                (None, None) => return Err(Failure::Usage("give --counts or --text".into())),
            };
            if counts.iter().all(|&c| c == 0) {
                return Err(data("all counts are zero"));
            }
            let h = entropy_of_counts(&counts);
            let n: u64 = counts.iter().sum();
            Ok(match format {
                Format::Json => json_line(json!({ "counts": counts, "n": n, "entropy": h })),
                Format::Csv => format!("n,entropy\n{n},{h:.6}\n"),
                Format::Text => format!("H = {h:.6}\n"),
            })
        }
        Command::Huffman { counts, text } => match (counts, text) {
            (Some(c), _) => {
                let table: FrequencyTable<usize> = c.into_iter().enumerate().collect();
                code_output(&huffman_build(&table)?, None, format)
            }
            (None, Some(t)) => {
                let chars: Vec<char> = t.chars().collect();
                let code = huffman_build(&char_table(&t))?;
                code_output(&code, Some(&chars), format)
            }
            (None, None) => Err(Failure::Usage("give --counts or --text".into())),
        },
        Command::Enumcode { input, alphabet, decode } => {
            let alphabet: Vec<char> = match alphabet {
                Some(a) => a.chars().collect(),
                None => {
                    let mut a: Vec<char> = input.chars().collect();
                    a.sort_unstable();
                    a.dedup();
                    a
                }
            };
            if decode {
                let word: String = enum_decode(&parse_bits(&input)?, &alphabet)?.into_iter().collect();
                Ok(match format {
                    Format::Json => json_line(json!({ "word": word })),
                    _ => format!("{word}\n"),
                })
            } else {
                let word: Vec<char> = input.chars().collect();
                let bits = enum_encode(&word, &alphabet)?;
                Ok(match format {
                    Format::Json => json_line(json!({
                        "alphabet": alphabet.iter().collect::<String>(),
                        "encoded": bits.to_string(),
                        "bits": bits.len(),
                    })),
                    _ => format!("{bits}\n"),
                })
            }
        }
        Command::Pack { scheme, parts, tail, unpack } => {
            if let Some(s) = unpack {
                let [packed] = parts.as_slice() else {
                    return Err(Failure::Usage("--unpack takes exactly one packed string".into()));
                };
                let packed = parse_bits(packed)?;
                let (parts, tail) = match scheme {
                    Scheme::Unary => pair_unpack_unary(&packed, s)?,
                    Scheme::Len => pair_unpack_len(&packed, s)?,
                };
                let parts: Vec<String> = parts.iter().map(|p| p.to_string()).collect();
                return Ok(match format {
                    Format::Json => json_line(json!({ "parts": parts, "tail": tail.to_string() })),
                    _ => format!("{}\ntail {}\n", parts.join(" "), tail),
                });
            }
            let parts = parts.iter().map(|p| parse_bits(p)).collect::<Result<Vec<_>, _>>()?;
            let tail = parse_bits(&tail)?;
            if scheme == Scheme::Len && parts.iter().any(BitString::is_empty) {
                return Err(data("length-prefixed packing needs nonempty parts"));
            }
            let packed = match scheme {
                Scheme::Unary => pair_pack_unary(&parts, &tail),
                Scheme::Len => pair_pack_len(&parts, &tail),
            };
            Ok(match format {
                Format::Json => json_line(json!({ "packed": packed.to_string(), "bits": packed.len() })),
                _ => format!("{packed}\n"),
            })
        }
        Command::Ncd { codec, clamp, x, y } => {
            let codec = resolve_codec(&codec, config)?;
            let (x, y) = (read_file(&x)?, read_file(&y)?);
            let d = ncd(&SizeCache::new(), codec.as_ref(), &x, &y, NcdOptions { clamp })?;
            Ok(match format {
                Format::Json => json_line(json!({ "codec": codec.name(), "ncd": d })),
                _ => format!("{}\n", format_value(d)),
            })
        }
        Command::Matrix { codec, corpus, clamp, raw, report } => {
            let codec = resolve_codec(&codec, config)?;
            let items = load_corpus(&corpus).map_err(|(p, e)| data(format!("{}: {e}", p.display())))?;
            let cache = SizeCache::new();
            let opts = NcdOptions { clamp };
            let m = if raw {
                raw_distance_matrix(&cache, codec.as_ref(), &items, opts)?
            } else {
                distance_matrix(&cache, codec.as_ref(), &items, opts)?
            };
            if report {
                let r = serde_json::to_string(&metric_report(&m)).expect("report serializes");
                eprintln!("{r}");
            }
            Ok(render_matrix(&m, format))
        }
        Command::Cluster { input, newick, json } => {
            let text = match input {
                Some(p) => String::from_utf8(read_file(&p)?).map_err(data)?,
                None => {
                    let mut s = String::new();
                    io::stdin().read_to_string(&mut s).map_err(data)?;
                    s
                }
            };
            let m = DistanceMatrix::parse(&text).map_err(data)?;
            let tree = upgma(&m).map_err(data)?;
            let as_json = json || (!newick && format == Format::Json);
            Ok(if as_json {
                json_line(tree.to_json())
            } else {
                format!("{}\n", tree.to_newick())
            })
        }
        Command::Mltest { test, alpha, bits } => {
            let alpha = parse_alpha(alpha.as_deref())?;
            let test = test_by_name(&test, alpha.as_ref())?;
            let x = parse_bits(&bits)?;
            // levels are nested, so membership stops at the first failure
            let bound = 2 * x.len() + 1;
            let level = (0..=bound).take_while(|&m| test.member(m, &x)).last();
            Ok(match format {
                Format::Json => json_line(json!({ "test": test.name(), "x": bits, "level": level })),
                _ => match level {
                    Some(m) => format!("{}: x in V_m for m <= {m}\n", test.name()),
                    None => format!("{}: x in no critical region\n", test.name()),
                },
            })
        }
        Command::Census { test, n, max_level, alpha } => {
            if n > config.census_max_n {
                return Err(data(format!("census limited to n <= {}", config.census_max_n)));
            }
            let alpha = parse_alpha(alpha.as_deref())?;
            let test = test_by_name(&test, alpha.as_ref())?;
            let report = census(test.as_ref(), n, max_level.unwrap_or(n))?;
            Ok(match format {
                Format::Json => format!("{}\n", report.to_json()),
                Format::Text => report.to_table(),
                Format::Csv => {
                    let mut out = String::from("m,members,total,proportion,reference,discrepancy\n");
                    for l in &report.levels {
                        let _ = writeln!(
                            out,
                            "{},{},{},{},{},{}",
                            l.m,
                            l.members,
                            l.total,
                            l.proportion(),
                            l.reference.as_deref().unwrap_or(""),
                            l.discrepancy.map_or(String::new(), |d| d.to_string())
                        );
                    }
                    out
                }
            })
        }
        Command::Toyk { bits, cap } => {
            let x = parse_bits(&bits)?;
            let limit = config.toyk_max_len;
            let cap = cap.unwrap_or(x.len() + 1);
            if cap > limit + 1 {
                return Err(data(format!("program cap limited to {}", limit + 1)));
            }
            let exact = k_exact_with_limit(&x, limit).map_err(data)?;
            let trace = upper_bound_trace(&x, cap);
            Ok(match format {
                Format::Json => json_line(json!({
                    "x": bits,
                    "cap": cap,
                    "trace": trace.rows,
                    "limit": trace.limit(),
                    "k_exact": exact,
                })),
                Format::Csv => {
                    let mut out = String::from("t,F\n");
                    for r in &trace.rows {
                        let _ = writeln!(out, "{},{}", r.budget, r.bound);
                    }
                    out
                }
                Format::Text => format!("{}limit = {}\nK = {exact}\n", trace.to_table(), trace.limit()),
            })
        }
        Command::NgdIndex { corpus, output } => {
            let index = HitIndex::from_dir(&corpus)?;
            let text = index.to_json();
            match output {
                Some(p) => {
                    fs::write(&p, &text).map_err(|e| data(format!("{}: {e}", p.display())))?;
                    Ok(format!(
                        "indexed {} documents, {} terms\n",
                        index.total_documents(),
                        index.vocabulary().count()
                    ))
                }
                None => Ok(format!("{text}\n")),
            }
        }
        Command::Ngd { index, x, y } => {
            let index = load_index(&index)?;
            let d = ngd(&index, &x, &y)?;
            Ok(match format {
                Format::Json => json_line(json!({ "x": x, "y": y, "ngd": format_value(d) })),
                _ => format!("{}\n", format_value(d)),
            })
        }
        Command::NgdMatrix { index, terms } => {
            let index = load_index(&index)?;
            let terms: Vec<&str> = terms.iter().map(String::as_str).collect();
            let result = ngd_matrix(&index, &terms)?;
            for t in &result.skipped {
                eprintln!("kolmo: skipping {t:?}: no hits");
            }
            Ok(render_matrix(&result.matrix, format))
        }
    }
}

fn parse_alpha(text: Option<&str>) -> Result<Option<num_rational::BigRational>, Failure> {
    text.map(|t| parse_rational(t).ok_or_else(|| Failure::Usage(format!("bad alpha {t:?}"))))
        .transpose()
}

fn load_index(path: &Path) -> Result<HitIndex, Failure> {
    let text = String::from_utf8(read_file(path)?).map_err(data)?;
    Ok(HitIndex::from_json(&text)?)
}
