//! Command-line front end. [`run`] takes the full argument vector and
//! returns the exit status with the text to print, so it can be tested
//! without spawning a process.
//!
//! Exit status: 0 on success, 1 when the input is well formed but the
//! mathematics says no (not unitary, no isomorphism, point not fixed, …),
//! 2 when the input cannot be parsed.

use clap::{Parser, Subcommand, ValueEnum};

use leavitt::dynamics::{self, Point};
use leavitt::isomorphisms::{aap_data, gcd_iso, verify_hom, Homomorphism};
use leavitt::matrices::is_unitary;
use leavitt::text::{self, GRAMMAR};
use leavitt::thompson::{FromMatrixOptions, LeafSet, TreePair};
use leavitt::{Error, RingElement, Shape};

#[derive(Parser, Debug)]
#[command(name = "leavitt", version, about = "Exact computation in Leavitt rings and Brin-Higman-Thompson groups")]
struct Cli {
    /// Print the input grammar and exit.
    #[arg(long)]
    grammar: bool,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(clap::Args, Debug, Clone, Copy)]
struct Ring {
    #[arg(long, default_value_t = 2)]
    r: usize,
    #[arg(long, default_value_t = 1)]
    t: usize,
    /// Matrix size for inputs written with e[i,j] units instead of brackets.
    #[arg(long, default_value_t = 1)]
    m: usize,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Show {
    Preimages,
    #[value(name = "Y")]
    Y,
    Pi,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum HomKind {
    Aap,
    AapInverse,
    Gcd,
    GcdInverse,
}

#[derive(clap::Args, Debug, Clone, Copy)]
struct HomArgs {
    #[arg(long, value_enum)]
    kind: HomKind,
    #[arg(long)]
    r: usize,
    #[arg(long, default_value_t = 1)]
    t: usize,
    /// Size for the aap kinds.
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    m1: Option<usize>,
    #[arg(long)]
    m2: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the normal form of an element or matrix.
    Normalize {
        #[command(flatten)]
        ring: Ring,
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    Mul {
        #[command(flatten)]
        ring: Ring,
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
    },
    /// Conjugate transpose.
    Involute {
        #[command(flatten)]
        ring: Ring,
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    IsUnitary {
        #[command(flatten)]
        ring: Ring,
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Recover the tree pair of a positive unitary matrix (JSON output).
    ToTreepair {
        #[command(flatten)]
        ring: Ring,
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long, default_value_t = 4)]
        max_extra_levels: usize,
    },
    ToMatrix {
        pair: String,
    },
    /// `g` followed by `h`.
    Compose {
        g: String,
        h: String,
    },
    Inverse {
        pair: String,
    },
    Equal {
        g: String,
        h: String,
    },
    /// Decide whether a JSON list of leaves is a basis.
    IsBasis {
        #[command(flatten)]
        ring: Ring,
        leaves: String,
        /// Report the unitary-set test instead.
        #[arg(long)]
        unitary_set: bool,
    },
    AapIso {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, value_enum, default_value = "preimages")]
        show: Show,
    },
    /// Print the generator table of the isomorphism Mat_m1 → Mat_m2.
    GcdIso {
        #[arg(long)]
        r: usize,
        #[arg(long, default_value_t = 1)]
        t: usize,
        #[arg(long)]
        m1: usize,
        #[arg(long)]
        m2: usize,
    },
    ApplyHom {
        #[command(flatten)]
        hom: HomArgs,
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    VerifyHom {
        #[command(flatten)]
        hom: HomArgs,
    },
    /// Apply a tree pair to a point.
    Act {
        pair: String,
        point: String,
    },
    Germ {
        pair: String,
        point: String,
    },
    GermRank {
        point: String,
    },
    /// Conjugacy classes of cyclic subgroups of order dividing p^a.
    Cc {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        a: u32,
        #[arg(long)]
        r: u64,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        closed_form: bool,
    },
}

fn shape(r: usize, t: usize) -> Result<Shape, Error> {
    Shape::new(r, t)
}

fn matrix(ring: Ring, s: &str) -> Result<RingElement, Error> {
    let sh = shape(ring.r, ring.t)?;
    if s.trim_start().starts_with('[') {
        text::parse_matrix(sh, s)
    } else {
        text::parse_element(sh, ring.m, ring.m, s)
    }
}

fn pair(s: &str) -> Result<TreePair, Error> {
    TreePair::from_json(s)
}

fn bool_text(b: bool) -> String {
    b.to_string()
}

fn table(h: &Homomorphism) -> String {
    h.table().into_iter().map(|(k, v)| format!("{k} -> {v}")).collect::<Vec<_>>().join("\n")
}

fn hom(args: HomArgs) -> Result<Homomorphism, Error> {
    let need = |v: Option<usize>, name: &str| {
        v.ok_or_else(|| Error::InvalidParameter(format!("--{name} is required for this kind")))
    };
    match args.kind {
        HomKind::Aap | HomKind::AapInverse => {
            if args.t != 1 {
                return Err(Error::InvalidParameter("the aap kinds act on t = 1".into()));
            }
            let d = aap_data(args.r, need(args.m, "m")?)?;
            Ok(if args.kind == HomKind::Aap { d.forward() } else { d.inverse() })
        }
        HomKind::Gcd | HomKind::GcdInverse => {
            let iso = gcd_iso(args.r, args.t, need(args.m1, "m1")?, need(args.m2, "m2")?)?;
            Ok(if args.kind == HomKind::Gcd { iso.forward } else { iso.inverse })
        }
    }
}

fn dispatch(cmd: Command) -> Result<String, Error> {
    Ok(match cmd {
        Command::Normalize { ring, expr } => matrix(ring, &expr)?.to_string(),
        Command::Mul { ring, a, b } => matrix(ring, &a)?.mul(&matrix(ring, &b)?)?.to_string(),
        Command::Involute { ring, expr } => matrix(ring, &expr)?.involute().to_string(),
        Command::IsUnitary { ring, expr } => bool_text(is_unitary(&matrix(ring, &expr)?).is_unitary()),
        Command::ToTreepair { ring, expr, max_extra_levels } => {
            let u = matrix(ring, &expr)?;
            TreePair::from_matrix(&u, FromMatrixOptions { max_extra_levels })?.to_json()
        }
        Command::ToMatrix { pair: p } => pair(&p)?.to_matrix().to_string(),
        Command::Compose { g, h } => pair(&g)?.compose(&pair(&h)?)?.to_json(),
        Command::Inverse { pair: p } => pair(&p)?.inverse().to_json(),
        Command::Equal { g, h } => bool_text(pair(&g)?.equals(&pair(&h)?)?),
        Command::IsBasis { ring, leaves, unitary_set } => {
            let set = LeafSet::from_json(ring.m, shape(ring.r, ring.t)?, &leaves)?;
            bool_text(if unitary_set { set.is_unitary_set() } else { set.is_basis() })
        }
        Command::AapIso { r, m, show } => {
            let d = aap_data(r, m)?;
            let iso = d.isomorphism();
            iso.check().map_err(Error::VerificationFailed)?;
            match show {
                Show::Y => d.y.to_string(),
                Show::Pi => {
                    let mut lines: Vec<String> =
                        d.pi_window(0, (m * r) as i64).into_iter().map(|(i, j)| format!("{i} -> {j}")).collect();
                    for ((s, j), h) in &d.hash {
                        lines.push(format!("{s}#{j} = {h}"));
                    }
                    lines.join("\n")
                }
                Show::Preimages => {
                    let mut lines = Vec::new();
                    for i in 1..=m {
                        for j in 1..=m {
                            lines.push(format!("e[{i},{j}] <- {}", d.units[i - 1][j - 1]));
                        }
                    }
                    for s in 1..=r {
                        lines.push(format!("y{s} e[1,{s}] <- {}", d.corners[s - 1][s - 1]));
                    }
                    lines.join("\n")
                }
            }
        }
        Command::GcdIso { r, t, m1, m2 } => {
            let iso = gcd_iso(r, t, m1, m2)?;
            iso.check().map_err(Error::VerificationFailed)?;
            table(&iso.forward)
        }
        Command::ApplyHom { hom: args, expr } => {
            let h = hom(args)?;
            let (m, sh) = h.source();
            let ring = Ring { r: sh.r(), t: sh.t(), m };
            h.apply(&matrix(ring, &expr)?)?.to_string()
        }
        Command::VerifyHom { hom: args } => bool_text(verify_hom(&hom(args)?)),
        Command::Act { pair: p, point } => dynamics::act(&pair(&p)?, &Point::parse(&point)?)?.to_string(),
        Command::Germ { pair: p, point } => {
            let v = dynamics::germ(&pair(&p)?, &Point::parse(&point)?)?;
            let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
            format!("({})", parts.join(", "))
        }
        Command::GermRank { point } => dynamics::germ_rank(&Point::parse(&point)?).to_string(),
        Command::Cc { p, a, r, m, closed_form } => {
            let n = if closed_form { dynamics::cc_closed_form(p, a, r, m)? } else { dynamics::cc_count(p, a, r, m)? };
            n.to_string()
        }
    })
}

/// Runs the command line `argv` (including the program name).
pub fn run<I, S>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return (code, e.to_string().trim_end().to_string());
        }
    };
    if cli.grammar {
        return (0, GRAMMAR.trim_end().to_string());
    }
    let Some(cmd) = cli.command else {
        return (2, "error: no subcommand given; try --help".into());
    };
    match dispatch(cmd) {
        Ok(out) => (0, out),
        Err(e) => (if e.is_parse() { 2 } else { 1 }, format!("error: {e}")),
    }
}
