//! Prints each recorded discrepancy with its freshly computed evidence.

fn main() -> shelf_guess::Result<()> {
    for e in shelf_guess::errata::errata()? {
        for line in e.lines() {
            println!("{line}");
        }
        println!();
    }
    Ok(())
}
