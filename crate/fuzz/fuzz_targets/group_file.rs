#![no_main]
use libfuzzer_sys::fuzz_target;
use spherica::gelfand::is_gelfand_pair;
use spherica::io::GroupFile;
use spherica::GroupOptions;

// Small cap so closures stay cheap.
fuzz_target!(|data: &[u8]| {
    let Ok(file) = GroupFile::parse(data) else { return };
    let opts = GroupOptions {
        max_order: 200,
        ..Default::default()
    };
    if let Ok(pair) = file.build(&opts) {
        let _ = is_gelfand_pair(&pair);
    }
});
