//! Result-table readers used by `summarize` and `plotdata`.

#![no_main]

use libfuzzer_sys::fuzz_target;
use triset_bench::records::{read_rows, ArchiveRecord, SelectionRecord, TimingRecord};
use triset_bench::summary::{summarize, SignificanceRow, SummaryRow};

fuzz_target!(|data: &[u8]| {
    if data.len() > 1 << 20 {
        return;
    }
    let archives = read_rows::<ArchiveRecord, _>(data);
    let selections = read_rows::<SelectionRecord, _>(data);
    let _ = read_rows::<TimingRecord, _>(data);
    let _ = read_rows::<SummaryRow, _>(data);
    let _ = read_rows::<SignificanceRow, _>(data);
    if let (Ok(a), Ok(s)) = (archives, selections) {
        let _ = summarize(&a, &s);
    }
});
