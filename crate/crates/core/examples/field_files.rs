//! Writing a field to disk, reading it back and exporting profiles.

use fractal_smoothing::extremizers::annulus;
use fractal_smoothing::grid::io::{profile_csv, radial_profile_csv, read_field, write_field};
use fractal_smoothing::grid::{half_wave, GridSpec};

fn main() -> fractal_smoothing::Result<()> {
    let dir = std::env::temp_dir().join("fractal-lab-fields");
    std::fs::create_dir_all(&dir)?;
    let grid = GridSpec::new(256, 8.0)?;
    let u = half_wave(&annulus(grid, 4)?, 1.0, 1)?;
    let path = dir.join("annulus_t1.bin");
    write_field(&path, &u)?;
    let back = read_field(&path)?;
    println!("wrote {} ({} values), round trip exact: {}", path.display(), back.values().len(), back == u);
    std::fs::write(dir.join("annulus_t1_x.csv"), profile_csv(&u))?;
    let radial = radial_profile_csv(&u);
    std::fs::write(dir.join("annulus_t1_r.csv"), &radial)?;
    for line in radial.lines().take(6) {
        println!("{line}");
    }
    Ok(())
}
