//! Dirichlet characters, conductors and the Gauss-sum bounds.

use atoral_lab::galois::{
    all_subgroups, char_conductor, enumerate_characters, gauss_audit, gauss_sum, subgroup_sum_audit,
};

fn main() -> atoral_lab::Result<()> {
    let n = 15;
    for (i, chi) in enumerate_characters(n).iter().enumerate() {
        let tau = gauss_sum(chi, 1);
        println!("chi_{i} mod {n}: order {}, conductor {}, |tau| = {:.4}", chi.order(), char_conductor(chi), tau.norm());
    }
    for g in all_subgroups(24)? {
        println!("{g}: order {}, conductor {}", g.order(), g.conductor());
    }
    let slack = gauss_audit(36).iter().map(|r| r.bound - r.tau_abs).fold(f64::INFINITY, f64::min);
    let sub = subgroup_sum_audit(36)?.iter().map(|r| r.bound - r.lhs).fold(f64::INFINITY, f64::min);
    println!("N = 36: smallest slack {slack:.3e} (characters), {sub:.3e} (subgroups)");
    Ok(())
}
