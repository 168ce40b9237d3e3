use hypermeasure::constants::{run_pipeline, ConstantsCert, Grid};
use hypermeasure::denominators::{d_mnr, read_cache, write_cache};
use hypermeasure::prime_tables::{build_bands, ThetaBandTable};
use hypermeasure::tables::{emit_rows, golden_rows, GOLDEN_CSV};
use hypermeasure::HypgIndex;

fn scratch(name: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("hypermeasure-it-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn denominator_cache_round_trip() {
    let entries: Vec<_> = [(1, 3, 13), (2, 5, 40), (1, 4, 0), (5, 12, 77)]
        .into_iter()
        .map(|(m, n, r)| {
            let idx = HypgIndex::new(m, n, r).unwrap();
            (idx, (*d_mnr(&idx).unwrap()).clone())
        })
        .collect();
    let path = scratch("denoms").join("d.bin");
    write_cache(&path, &entries).unwrap();
    assert_eq!(read_cache(&path).unwrap(), entries);
    std::fs::write(&path, b"junk").unwrap();
    assert!(read_cache(&path).is_err());
}

#[test]
fn band_table_round_trip() {
    let t = build_bands(5, 50_000).unwrap();
    assert_eq!(ThetaBandTable::from_csv(&t.to_csv(), 50_000).unwrap(), t);
    let dir = scratch("bands");
    t.save(&dir).unwrap();
    assert_eq!(ThetaBandTable::load(&dir, 5, 50_000).unwrap(), Some(t));
    assert_eq!(ThetaBandTable::load(&dir, 5, 60_000).unwrap(), None);
}

#[test]
fn table_csv_is_stable() {
    assert_eq!(emit_rows(&golden_rows()).unwrap(), GOLDEN_CSV);
}

#[test]
fn cert_json_round_trip() {
    let grid = Grid { r_step: 100, r_max: 1000, n_max: 20 };
    let cert = run_pipeline(3, &grid, 100, None).unwrap();
    let text = serde_json::to_string(&cert).unwrap();
    let back: ConstantsCert = serde_json::from_str(&text).unwrap();
    assert_eq!(back, cert);
    assert!(cert.ln_cn >= 0.0 && cert.r_comp <= 1000);
}

#[test]
fn overflowing_cn_serializes_as_null() {
    let grid = Grid { r_step: 100, r_max: 1000, n_max: 20 };
    let mut cert = run_pipeline(3, &grid, 100, None).unwrap();
    cert.ln_cn = 1e4;
    cert.cn = cert.ln_cn.exp();
    let v = serde_json::to_value(&cert).unwrap();
    assert!(v["cn"].is_null());
    let back: ConstantsCert = serde_json::from_value(v).unwrap();
    assert!(back.cn.is_infinite() && back.ln_cn == 1e4);
}
