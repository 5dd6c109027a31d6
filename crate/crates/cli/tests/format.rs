use losmimo_cli::csv::num;
use proptest::prelude::*;

fn significant_digits(s: &str) -> usize {
    let mantissa = s.split('e').next().unwrap().trim_start_matches('-');
    mantissa.chars().filter(char::is_ascii_digit).collect::<String>().trim_start_matches('0').len()
}

proptest! {
    #[test]
    fn round_trips_to_twelve_digits(m in -1.0f64..1.0, e in -30i32..30) {
        let x = m * 10f64.powi(e);
        let s = num(x);
        let back: f64 = s.parse().unwrap();
        prop_assert!((back - x).abs() <= 5e-12 * x.abs(), "{x} -> {s}");
        prop_assert!(significant_digits(&s) <= 12, "{s}");
        prop_assert!(!s.contains(' ') && !s.contains('+') || s.contains("e+"));
    }
}
