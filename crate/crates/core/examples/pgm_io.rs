//! Reading and writing PGM in both flavors, including 16-bit samples.
//!
//! ```text
//! cargo run --example pgm_io
//! ```

use homographic::{from_unit, read_pgm, to_unit, write_pgm, GrayImage, PgmFormat};

fn main() {
    let img = GrayImage::new(4, 2, 1000, vec![0, 1, 255, 256, 500, 999, 1000, 42]).unwrap();

    let ascii = write_pgm(&img, PgmFormat::P2);
    println!(
        "P2 ({} bytes):\n{}",
        ascii.len(),
        String::from_utf8_lossy(&ascii)
    );

    let binary = write_pgm(&img, PgmFormat::P5);
    let header_len = binary.len() - 2 * img.pixel_count();
    println!(
        "P5 ({} bytes), header {:?}",
        binary.len(),
        String::from_utf8_lossy(&binary[..header_len])
    );
    println!(
        "  big-endian samples: {:02x?}",
        &binary[header_len..header_len + 8]
    );

    assert_eq!(read_pgm(&ascii).unwrap(), img);
    assert_eq!(read_pgm(&binary).unwrap(), img);

    let commented = b"P2\n# a comment\n3 1 # trailing\n9\n0 4 9\n";
    let parsed = read_pgm(commented).unwrap();
    println!("\ncommented header parses to {:?}", parsed.samples());

    println!("\nunit mapping at maxval 9:");
    for s in parsed.samples() {
        let u = to_unit(*s, 9);
        println!("  {s} -> {u:.6} -> {}", from_unit(u, 9));
    }

    match read_pgm(b"P5\n2 2\n255\n\x00") {
        Err(e) => println!("\ntruncated input: {e}"),
        Ok(_) => unreachable!(),
    }
}
