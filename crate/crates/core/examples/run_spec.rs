//! Parse a JSON spec, run it, and print the record as CSV.

use ustlab::io::{parse_spec, run, write_record, Format};

fn main() -> ustlab::Result<()> {
    let spec = parse_spec(r#"{"kind": "cylinder", "grid": [2, 3], "A": [0, 3], "seed": 1}"#)?;
    let record = run(&spec)?;
    write_record(&record, Format::Csv, std::io::stdout().lock())
}
