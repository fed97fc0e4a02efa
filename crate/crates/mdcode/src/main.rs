use std::error::Error;
use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use mdcode::analysis::{growth_rate, kraft_partial_sum, DensityProfile};
use mdcode::code::{parse_code_list, Code};
use mdcode::fastdecode::{DecodeTable, ALL_STATES};
use mdcode::textcodec::{self, Container};

#[derive(Parser)]
#[command(
    name = "mdcode",
    version,
    about = "Multi-delimiter variable-length codes: compress text, enumerate codewords, \
             report code density, dump the D2 byte-decoding table"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone)]
struct CodeList(Vec<Code>);

fn parse_codes(s: &str) -> Result<CodeList, String> {
    parse_code_list(s).map(CodeList).map_err(|e| e.to_string())
}

fn parse_code(s: &str) -> Result<Code, String> {
    s.parse()
        .map_err(|e: mdcode::code::CodeParseError| e.to_string())
}

#[derive(Subcommand)]
enum Command {
    /// Compress a file with a rank-ordered code
    Compress {
        /// Code to use, e.g. D2, D2,3,5 or Fib3
        #[arg(long, value_parser = parse_code)]
        code: Code,
        input: PathBuf,
        output: PathBuf,
    },
    /// Restore the original bytes from a compressed container
    Decompress { input: PathBuf, output: PathBuf },
    /// Per-code compression statistics for a corpus, CSV on stdout
    Stats {
        /// Comma-separated codes; the first is the comparison baseline
        #[arg(long, value_parser = parse_codes)]
        codes: CodeList,
        input: PathBuf,
    },
    /// List all codewords up to a length, shortest first
    Enumerate {
        #[arg(long, value_parser = parse_code)]
        code: Code,
        #[arg(long)]
        max_len: usize,
    },
    /// Per-length density table, CSV on stdout
    Density {
        #[arg(long, value_parser = parse_codes)]
        codes: CodeList,
        #[arg(long, default_value_t = 15)]
        max_n: usize,
    },
    /// Write the D2 byte-decoding table and print its rows as CSV
    Table {
        /// Destination for the binary row payload
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            if let Some(io_err) = err.downcast_ref::<io::Error>() {
                if io_err.kind() == io::ErrorKind::BrokenPipe {
                    return ExitCode::SUCCESS;
                }
            }
            eprintln!("error: {err}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<(), Box<dyn Error>> {
    let stdout = io::stdout().lock();
    let mut out = BufWriter::new(stdout);
    match cli.command {
        Command::Compress {
            code,
            input,
            output,
        } => {
            let text = fs::read(&input)?;
            let container = textcodec::compress(&text, &code);
            fs::write(&output, container.to_bytes())?;
            eprintln!(
                "{}: {} tokens, {} vocabulary entries, {:.3} bits/token",
                code,
                container.token_count,
                container.vocabulary.len(),
                container.average_codeword_length()
            );
        }
        Command::Decompress { input, output } => {
            let data = fs::read(&input)?;
            let container = Container::from_bytes(&data)?;
            fs::write(&output, textcodec::decompress(&container)?)?;
        }
        Command::Stats { codes, input } => {
            let text = fs::read(&input)?;
            writeln!(
                out,
                "code,vocabulary_size,avg_codeword_length,delta_vs_first_pct,entropy_bits"
            )?;
            for report in textcodec::corpus_stats(&text, &codes.0) {
                writeln!(
                    out,
                    "\"{}\",{},{:.6},{:+.3},{:.6}",
                    report.code,
                    report.vocabulary_size,
                    report.average_codeword_length,
                    report.delta_vs_first_pct,
                    report.entropy_bits
                )?;
            }
        }
        Command::Enumerate { code, max_len } => {
            let mut book = code.codebook();
            for word in book.enumerate(max_len) {
                writeln!(out, "{word}")?;
            }
        }
        Command::Density { codes, max_n } => {
            writeln!(out, "code,n,f_n,s_n,kraft_partial,growth_estimate")?;
            for code in &codes.0 {
                let mut profile = DensityProfile::new(code.clone());
                for n in 1..=max_n {
                    let f = profile.count(n);
                    let s = profile.cumulative(n);
                    let kraft = kraft_partial_sum(code, n);
                    let growth = if f > 0u32.into() {
                        format!("{:.6}", growth_rate(code, n))
                    } else {
                        String::new()
                    };
                    writeln!(out, "\"{code}\",{n},{f},{s},{:.9},{growth}", kraft.to_f64())?;
                }
            }
        }
        Command::Table { out: path } => {
            let table = DecodeTable::build();
            fs::write(&path, table.to_bytes())?;
            eprintln!("wrote {} bytes to {}", table.byte_len(), path.display());
            writeln!(
                out,
                "state,state_index,byte,f1,w1,w1_len,f2,w2,w2_len,f3,w3,w3_len,zero_carry,next_index,next_state"
            )?;
            for state in ALL_STATES {
                for byte in 0..=255u8 {
                    let row = table.row(state, byte);
                    let field = |present: bool, (w, len): (u32, u32)| {
                        if present {
                            format!("{w:#x},{len}")
                        } else {
                            ",".to_string()
                        }
                    };
                    writeln!(
                        out,
                        "{:?},{},0x{byte:02X},{},{},{},{},{},{},{},{},{:?}",
                        state.label(),
                        state.index(),
                        u8::from(row.f1()),
                        field(true, row.w1()),
                        u8::from(row.f2()),
                        field(row.f1(), row.w2()),
                        u8::from(row.f3()),
                        field(row.f1() && row.f2(), row.w3()),
                        u8::from(row.carries_zero()),
                        row.next_state().index(),
                        row.next_state().label(),
                    )?;
                }
            }
        }
    }
    out.flush()?;
    Ok(())
}
