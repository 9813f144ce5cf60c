//! Writes a small bundle for checking with external array tools.
use mcpde::dataio::write_bundle;
use mcpde::Field;

fn main() {
    let path = std::env::args().nth(1).unwrap_or_else(|| "sample.npz".into());
    let f = Field::from_fn(256, |i, j| i as f32 * 0.5 - j as f32 * 0.25);
    let m = Field::from_fn(256, |i, j| if i < j { 1.0 } else { 0.0 });
    write_bundle(std::path::Path::new(&path), &f, &f.clone().masked(&m), &m).unwrap();
}
