//! Sweeps the density offset c in rho0 = c + sin(2 pi x) and prints the
//! verdict table: zeros of rho0 for c <= 1, none above.

use hs2::cli::{cmd_sweep, parse_axis, write_sweep};

const TEMPLATE: &str = "\
k = 1
t_end = 4
rho0.mode = 1, 0, 1
";

fn main() {
    let axis = parse_axis("rho0.const=0.25:1.75:7").unwrap();
    let rows = cmd_sweep(TEMPLATE, &axis).expect("template is valid");
    write_sweep(std::io::stdout().lock(), &rows).unwrap();
}
