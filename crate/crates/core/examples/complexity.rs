//! XOR counts and update complexity beside the closed forms.

use eoflex::metrics::{complexity_report, to_text};
use eoflex::CodeParams;

pub fn main() -> eoflex::Result<()> {
    let list = [
        CodeParams::new(2, 5, 3)?,
        CodeParams::new(1, 5, 3)?,
        CodeParams::new(3, 9, 3)?,
        CodeParams::new(1, 7, 5)?,
    ];
    print!("{}", to_text(&complexity_report(&list)));
    Ok(())
}
