//! Gnuplot scripts written next to a CSV output.

use std::path::Path;

use spindemag_core::entanglement::SpinPair;

fn header(csv: &Path) -> String {
    let name = csv.file_name().map_or_else(String::new, |s| s.to_string_lossy().into_owned());
    format!(
        "set datafile separator ','\nset datafile commentschars '#'\nset key autotitle columnhead\ndata = '{}'\n",
        name.replace('\'', "''")
    )
}

/// Concurrence and β against ω0 for an `ad` run.
pub fn ad(csv: &Path, pairs: &[SpinPair]) -> String {
    let mut s = header(csv);
    s += "set logscale x\nset xlabel 'omega0'\nset multiplot layout 2,1\nset ylabel 'beta'\n";
    s += "plot data using 1:2 with lines\nset ylabel 'concurrence'\nplot ";
    let curves: Vec<String> = (0..pairs.len())
        .map(|k| format!("data using 1:{} with lines", 6 + k))
        .collect();
    s += &curves.join(", ");
    s += "\nunset multiplot\n";
    s
}

/// β* against ω0 for a `boundary` run.
pub fn boundary(csv: &Path) -> String {
    let mut s = header(csv);
    s += "set xlabel 'omega0'\nset ylabel 'beta'\nplot data using 1:2 with lines\n";
    s
}

/// One β curve per chain length for a `sweep` run.
pub fn sweep(csv: &Path, n_list: &[usize]) -> String {
    let mut s = header(csv);
    s += "set logscale x\nset xlabel 'omega0'\nset ylabel 'beta'\nplot ";
    let curves: Vec<String> = n_list
        .iter()
        .map(|n| format!("data using ($1=={n} ? $2 : 1/0):3 with lines title 'N={n}'"))
        .collect();
    s += &curves.join(", ");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn columns_follow_csv_layout() {
        let p = [SpinPair::new(1, 3).unwrap(), SpinPair::new(1, 5).unwrap()];
        let s = ad(Path::new("out/run.csv"), &p);
        assert!(s.contains("data = 'run.csv'"));
        assert!(s.contains("using 1:6") && s.contains("using 1:7"));
        assert!(sweep(Path::new("s.csv"), &[4, 5]).contains("$1==5"));
    }
}
