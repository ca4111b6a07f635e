//! Round trip of a channel through the JSON file format.

use ebcap::channels::file::{channel_to_json, parse_channel};
use ebcap::channels::{depolarizing, is_entanglement_breaking_qubit};
use ebcap::qnum::max_abs_diff;

fn main() -> ebcap::Result<()> {
    let ch = depolarizing(0.7)?;
    let text = channel_to_json(&ch);
    println!("{text}");
    let back = parse_channel(&text)?;
    let diff = ch
        .kraus_ops()
        .iter()
        .zip(back.kraus_ops())
        .map(|(a, b)| max_abs_diff(a, b))
        .fold(0.0, f64::max);
    println!("round-trip deviation {diff:.2e}");
    println!("{}", is_entanglement_breaking_qubit(&back)?.verdict);

    let broken = r#"{"dim_in": 2, "dim_out": 2, "kraus": [[[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.5, 0.0]]]]}"#;
    match parse_channel(broken) {
        Ok(_) => println!("unexpectedly accepted"),
        Err(e) => println!("rejected: {e}"),
    }
    Ok(())
}
