#![no_main]
use std::sync::OnceLock;

use libfuzzer_sys::fuzz_target;
use spherica::builtin::BuiltinPair;
use spherica::io::{Basis, FunctionFile};
use spherica::{GelfandPair, GroupOptions};

fn pair() -> &'static GelfandPair {
    static PAIR: OnceLock<GelfandPair> = OnceLock::new();
    PAIR.get_or_init(|| BuiltinPair::Dih(5).group_file().build(&GroupOptions::default()).unwrap())
}

fuzz_target!(|data: &[u8]| {
    let Ok(file) = FunctionFile::parse(data) else { return };
    if let Ok((f, basis)) = file.resolve(pair()) {
        let out = FunctionFile::from_function(&f, pair(), basis).unwrap();
        assert_eq!(out.basis, Some(basis));
        let _ = FunctionFile::from_function(&f, pair(), Basis::Coset).unwrap();
    }
});
