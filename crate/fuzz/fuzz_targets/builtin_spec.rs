#![no_main]
use libfuzzer_sys::fuzz_target;
use spherica::builtin::BuiltinPair;
use spherica::GroupOptions;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(spec) = text.parse::<BuiltinPair>() else { return };
    assert_eq!(spec.to_string().parse::<BuiltinPair>().unwrap(), spec);
    let opts = GroupOptions {
        max_order: 500,
        ..Default::default()
    };
    let _ = spec.group_file().build(&opts);
});
