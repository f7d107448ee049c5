#![no_main]
use std::sync::OnceLock;

use libfuzzer_sys::fuzz_target;
use spherica::builtin::BuiltinPair;
use spherica::gelfand::compute_spherical_functions;
use spherica::io::MultiplierFile;
use spherica::{build_operator, GroupOptions, SphericalTable};

fn table() -> &'static SphericalTable {
    static TABLE: OnceLock<SphericalTable> = OnceLock::new();
    TABLE.get_or_init(|| {
        let pair = BuiltinPair::Sym(4).group_file().build(&GroupOptions::default()).unwrap();
        compute_spherical_functions(&pair, 0, 1e-6).unwrap()
    })
}

fuzz_target!(|data: &[u8]| {
    let Ok(file) = MultiplierFile::parse(data) else { return };
    let Ok(m) = file.multiplier() else { return };
    if let Ok(op) = build_operator(&m, table(), file.convention) {
        let _ = op.apply(&table().row(0));
    }
});
