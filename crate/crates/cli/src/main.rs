use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use foliation_core::cli::{exit_code, run, Command, EXIT_INPUT};

#[derive(Parser)]
#[command(name = "foliation", version, about = "Exact computations for singular polynomial foliations")]
struct Args {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check that the generators are closed under the bracket.
    CheckInvolutive { file: PathBuf },
    /// Isotropy Lie algebra at the origin.
    Isotropy { file: PathBuf },
    /// Holonomy filtration of the isotropy algebra.
    Filtration { file: PathBuf },
    /// Linear holonomy representation.
    LinearHolonomy { file: PathBuf },
    /// Radical and semisimple part of the isotropy algebra.
    Levi { file: PathBuf },
    /// Certify the Artin-Rees bound up to a degree cap.
    ArtinRees {
        file: PathBuf,
        #[arg(long)]
        max_degree: Option<u32>,
    },
    /// Build a connection that is flat and linear to the given order.
    Linearize {
        file: PathBuf,
        #[arg(long)]
        order: Option<u32>,
    },
    /// Radical sub-foliation via a linearized connection.
    RadicalFoliation {
        file: PathBuf,
        #[arg(long)]
        order: Option<u32>,
    },
    /// Recompute the defects of a stored connection.
    Verify {
        file: PathBuf,
        #[arg(long)]
        connection: PathBuf,
        #[arg(long)]
        order: Option<u32>,
    },
}

fn read(path: &PathBuf) -> Result<String, ExitCode> {
    fs::read_to_string(path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", path.display());
        ExitCode::from(EXIT_INPUT as u8)
    })
}

fn main() -> ExitCode {
    let args = Args::parse();
    let (file, command) = match args.command {
        Cmd::CheckInvolutive { file } => (file, Ok(Command::CheckInvolutive)),
        Cmd::Isotropy { file } => (file, Ok(Command::Isotropy)),
        Cmd::Filtration { file } => (file, Ok(Command::Filtration)),
        Cmd::LinearHolonomy { file } => (file, Ok(Command::LinearHolonomy)),
        Cmd::Levi { file } => (file, Ok(Command::Levi)),
        Cmd::ArtinRees { file, max_degree } => (file, Ok(Command::ArtinRees { max_degree })),
        Cmd::Linearize { file, order } => (file, Ok(Command::Linearize { order })),
        Cmd::RadicalFoliation { file, order } => (file, Ok(Command::RadicalFoliation { order })),
        Cmd::Verify { file, connection, order } => {
            let c = read(&connection).map(|connection| Command::Verify { connection, order });
            (file, c)
        }
    };
    let command = match command {
        Ok(c) => c,
        Err(code) => return code,
    };
    let source = match read(&file) {
        Ok(s) => s,
        Err(code) => return code,
    };
    match run(&command, &source) {
        Ok(report) => {
            print!("{}", report.to_json(true));
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
