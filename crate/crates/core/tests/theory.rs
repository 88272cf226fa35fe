use udas_core::analysis::{auer_theory, shannon_limit, CapacitySettings};
use udas_core::phy::{ebn0_to_n0, ModSpec};
use udas_core::udas::build_cyclic;
use udas_core::Amp;

fn generator(len: usize) -> Vec<Amp> {
    (0..len / 2).flat_map(|k| [Amp::new(1 << k, 0), Amp::new(0, 1 << k)]).collect()
}

#[test]
fn shannon_limits_match_tables() {
    let four = build_cyclic(&generator(4)).unwrap();
    let six = build_cyclic(&generator(6)).unwrap();
    let spec = ModSpec::new(2).unwrap();
    let s = CapacitySettings::default();
    let cases = [
        (&four, 2, 0.006, -1.5682),
        (&four, 2, 0.506, 0.9176),
        (&four, 2, 0.895, 5.4437),
        (&four, 3, 0.499, 1.6466),
        (&six, 2, 0.502, 2.0699),
    ];
    for (set, users, rate, want) in cases {
        let got = shannon_limit(rate, set, users, 1, spec, &s).unwrap();
        assert!((got - want).abs() < 0.1, "J={users} L={} Rc={rate}: {got:.4} vs {want}", set.l());
    }
}

#[test]
fn limit_grows_with_users_and_length() {
    let four = build_cyclic(&generator(4)).unwrap();
    let six = build_cyclic(&generator(6)).unwrap();
    let spec = ModSpec::new(2).unwrap();
    let s = CapacitySettings::default();
    for rate in [0.2, 0.5, 0.8] {
        let two = shannon_limit(rate, &four, 2, 1, spec, &s).unwrap();
        let three = shannon_limit(rate, &four, 3, 1, spec, &s).unwrap();
        let longer = shannon_limit(rate, &six, 2, 1, spec, &s).unwrap();
        assert!(three > two && longer > two, "Rc={rate}: {two} {three} {longer}");
    }
}

#[test]
fn auer_falls_with_frame_length() {
    let set = build_cyclic(&generator(4)).unwrap();
    let spec = ModSpec::new(2).unwrap();
    let n0 = ebn0_to_n0(0.0, 1.0, &spec, set.p_avg()).unwrap();
    let at = |rows| auer_theory(&set, rows, n0, &[0.25; 4], spec).unwrap().total;
    let (short, mid, long) = (at(102), at(138), at(196));
    assert!(short > mid && mid > long);
    assert!((1e-6..=1e-4).contains(&long), "{long}");
    eprintln!("{short:e} {mid:e} {long:e}");
}
