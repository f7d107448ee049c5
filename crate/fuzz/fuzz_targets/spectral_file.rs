#![no_main]
use std::sync::OnceLock;

use libfuzzer_sys::fuzz_target;
use spherica::builtin::BuiltinPair;
use spherica::gelfand::compute_spherical_functions;
use spherica::io::SpectralFile;
use spherica::{inverse_sft, GroupOptions, SphericalTable};

fn table() -> &'static SphericalTable {
    static TABLE: OnceLock<SphericalTable> = OnceLock::new();
    TABLE.get_or_init(|| {
        let pair = BuiltinPair::Cyc(3).group_file().build(&GroupOptions::default()).unwrap();
        compute_spherical_functions(&pair, 0, 1e-6).unwrap()
    })
}

fuzz_target!(|data: &[u8]| {
    let Ok(file) = SpectralFile::parse(data) else { return };
    if let Ok(v) = file.vector() {
        let _ = inverse_sft(&v, table());
    }
});
