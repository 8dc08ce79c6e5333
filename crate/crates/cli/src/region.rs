use std::fmt::Write;

use qchan::synthesis::region_grid;

use crate::{Outcome, RegionArgs};

/// CSV with columns `re_z,im_z,disc,oracle`; verdicts are `1`/`0`, blank
/// where the oracle does not apply.
pub fn cmd_region(args: &RegionArgs) -> anyhow::Result<Outcome> {
    if !(-1.0..=1.0).contains(&args.x) {
        anyhow::bail!("x must lie in [-1, 1], got {}", args.x);
    }
    let cells = region_grid(args.x, args.grid)?;
    let mut out = String::from("re_z,im_z,disc,oracle\n");
    for cell in cells {
        let oracle = match cell.oracle {
            Some(true) => "1",
            Some(false) => "0",
            None => "",
        };
        writeln!(out, "{},{},{},{}", cell.re_z, cell.im_z, u8::from(cell.disc), oracle)?;
    }
    Ok(Outcome::ok(out))
}
