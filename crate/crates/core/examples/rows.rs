//! Times generation for rows given as `r,m,g,n` (or `r,g,n` for regular graphs).
use std::time::Instant;

use bireg_core::bounds::ProblemSpec;
use bireg_core::generator::{generate_with, GeneratorOptions};

fn main() {
    for arg in std::env::args().skip(1) {
        let v: Vec<usize> = arg.split(',').map(|s| s.parse().expect("integer")).collect();
        let regular = v.len() == 3;
        let (spec, n) = if regular {
            (ProblemSpec { r: v[0], m: v[0] + 1, g: v[1] }, v[2])
        } else {
            (ProblemSpec::new(v[0], v[1], v[2]).expect("valid spec"), v[3])
        };
        let opts = GeneratorOptions { regular, ..Default::default() };
        let t = Instant::now();
        let mut count = 0;
        let stats = generate_with(&spec, n, &opts, &mut |_| count += 1).expect("generation");
        println!("{arg}: {count} graphs in {:.2?} ({stats:?})", t.elapsed());
    }
}
