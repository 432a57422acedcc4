//! Essential atorality: exact in one variable, the asymmetry criterion in more.

use atoral_lab::experiments::{atoral, read_poly};

fn main() -> atoral_lab::Result<()> {
    for text in [
        "x1^2 - 3*x1 + 1",
        "x1^2 + x1 + 1",
        "x1^4 - x1^3 - x1^2 - x1 + 1",
        "1 + x1 + x2",
        "x1 + x1^-1 + x2 + x2^-1 - 4",
    ] {
        let r = atoral(&read_poly(text, None)?)?;
        println!("{text:<32} {:<8} ({})", r.verdict, r.method);
    }
    Ok(())
}
