use std::collections::BTreeSet;
use std::io::Write;

use qalign::oracle::{brute_from_table, brute_positions_at, naive_table};
use qalign::rng::{derive_seed, rng_from_seed};
use qalign::{
    align_optimal, bbht_search, brute_min_distance, enumerate_optimal, hamming_table, load_fasta,
    optimal_k, AlignParams, AlignStatus, Alphabet, Backend, BbhtParams, Error, HammingMode,
    HammingTable, MarkPredicate, QuerySequence, SearchState, SequenceDatabase,
};
use rand::Rng;

/// Binary de Bruijn sequence B(2, 4) plus its 3-symbol wrap: every 4-mer
/// over {A, C} appears exactly once in 19 residues.
const DE_BRUIJN_19: &str = "AAAACAACCACACCCCAAA";

#[test]
fn fasta_file_to_alignment() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    write!(file, ">first domain\r\nMKV\r\nLA\r\n>second\nGGMKW\n").unwrap();
    let db = load_fasta(file.path(), Alphabet::Protein).unwrap();
    assert_eq!(db.len(), 10);
    assert_eq!(db.domain_offsets(), &[0, 5]);

    let q = QuerySequence::parse(Alphabet::Protein, "MKW").unwrap();
    let table = hamming_table(&db, &q, HammingMode::Residue).unwrap();
    let brute = brute_min_distance(&db, &q, HammingMode::Residue).unwrap();
    assert_eq!(brute.min_distance, 0);
    assert_eq!(brute.positions, vec![7]);

    let params = AlignParams::for_table(&table);
    let r = align_optimal(&table, &params).unwrap();
    assert_eq!((r.position, r.distance), (Some(7), Some(0)));
}

#[test]
fn missing_fasta_is_an_io_error() {
    let err = load_fasta("/definitely/not/here.fa", Alphabet::Dna).unwrap_err();
    assert!(matches!(err, Error::Io { .. }));
}

#[test]
fn complete_database_example() {
    let db = SequenceDatabase::parse(Alphabet::Dna, DE_BRUIJN_19).unwrap();
    let m = 4;
    assert_eq!(db.len(), (1 << m) + m - 1);
    let windows: BTreeSet<&[u8]> = (0..16).map(|i| db.window(i, m).unwrap()).collect();
    assert_eq!(windows.len(), 16);

    for planted in [0usize, 5, 11, 15] {
        let q = QuerySequence::new(Alphabet::Dna, db.window(planted, m).unwrap().to_vec()).unwrap();
        let table = hamming_table(&db, &q, HammingMode::Bit).unwrap();
        assert_eq!(table.n_prime(), 16);
        assert_eq!(table.positions_at(0), vec![planted]);

        let k = optimal_k(16).unwrap();
        let mut state = SearchState::init_uniform(&table).unwrap();
        state.evolve(&MarkPredicate::distance(0), k);
        assert!(state.probability(planted) > 0.95);

        let r = align_optimal(&table, &AlignParams::for_table(&table)).unwrap();
        assert_eq!((r.position, r.distance), (Some(planted), Some(0)));
    }
}

fn random_instance(seed: u64) -> (SequenceDatabase, QuerySequence, HammingMode) {
    let mut rng = rng_from_seed(seed);
    let alphabet = if rng.gen_bool(0.5) { Alphabet::Protein } else { Alphabet::Dna };
    let mode = if rng.gen_bool(0.5) { HammingMode::Bit } else { HammingMode::Residue };
    let k = alphabet.len() as u8;
    let m = rng.gen_range(1..=6);
    let n = rng.gen_range(m..=200);
    let mut residues: Vec<u8> = (0..n).map(|_| rng.gen_range(0..k)).collect();
    let query: Vec<u8> = (0..m).map(|_| rng.gen_range(0..k)).collect();
    if rng.gen_bool(0.5) {
        let at = rng.gen_range(0..=n - m);
        residues[at..at + m].copy_from_slice(&query);
        residues[at + rng.gen_range(0..m)] = rng.gen_range(0..k);
    }
    (
        SequenceDatabase::from_codes(alphabet, residues).unwrap(),
        QuerySequence::new(alphabet, query).unwrap(),
        mode,
    )
}

#[test]
fn alignment_is_sound_and_usually_optimal() {
    let mut optimal = 0;
    let runs = 60;
    for seed in 0..runs {
        let (db, q, mode) = random_instance(seed);
        let table = hamming_table(&db, &q, mode).unwrap();
        let brute = brute_min_distance(&db, &q, mode).unwrap();
        let params = AlignParams {
            n_max: table.max_distance(),
            master_seed: seed,
            ..AlignParams::for_table(&table)
        };
        let r = align_optimal(&table, &params).unwrap();
        assert_eq!(r.status, AlignStatus::Found);
        let (pos, dist) = (r.position.unwrap(), r.distance.unwrap());
        assert_eq!(table.get(pos), Some(dist));
        assert!(dist >= brute.min_distance);
        let budget = params.bbht.budget(table.n_prime());
        assert!(r.oracle_calls_total <= params.r as u64 * (dist as u64 + 1) * budget);
        for (i, level) in r.per_level_trace.iter().enumerate() {
            assert_eq!(level.n, i as u32);
        }
        if dist == brute.min_distance {
            optimal += 1;
        }
    }
    assert!(optimal as f64 >= 0.95 * runs as f64, "{optimal}/{runs}");
}

#[test]
fn enumeration_is_a_subset_of_brute_force() {
    for seed in 0..40 {
        let (db, q, mode) = random_instance(1000 + seed);
        let table = hamming_table(&db, &q, mode).unwrap();
        assert_eq!(table.values(), naive_table(&db, &q, mode).unwrap().as_slice());
        let best = brute_from_table(&table);
        let expected: BTreeSet<usize> = best.positions.iter().copied().collect();
        let params = AlignParams {
            master_seed: seed,
            n_max: table.max_distance(),
            ..AlignParams::for_table(&table)
        };
        let got = enumerate_optimal(&table, best.min_distance, &params, &BTreeSet::new()).unwrap();
        assert!(got.is_subset(&expected));
        if expected.len() <= 8 {
            assert_eq!(got, expected, "seed {seed}");
        }
    }
}

fn single_target_table(n: usize, targets: usize) -> HammingTable {
    let mut values = vec![1; n];
    for j in 0..targets {
        values[j * n / targets] = 0;
    }
    HammingTable::from_values(values, HammingMode::Residue, Alphabet::Dna, 1).unwrap()
}

fn bbht_stats(table: &HammingTable, master: u64, runs: u64, backend: Backend) -> (f64, f64) {
    let mark = MarkPredicate::distance(0);
    let mut successes = 0;
    let mut calls = 0;
    for i in 0..runs {
        let params = BbhtParams {
            seed: derive_seed(master, &[i]),
            backend,
            ..BbhtParams::default()
        };
        let out = bbht_search(table, &mark, &params).unwrap();
        if let Some(hit) = out.found {
            assert_eq!(table.get(hit.position), Some(0));
            successes += 1;
        }
        calls += out.oracle_calls;
    }
    (successes as f64 / runs as f64, calls as f64 / runs as f64)
}

#[test]
fn bbht_success_rate_across_sizes() {
    for n in [16usize, 64, 256, 1024, 4096] {
        let (rate, _) = bbht_stats(&single_target_table(n, 1), 77, 1000, Backend::Classes);
        assert!(rate >= 0.9, "n' = {n}: {rate}");
    }
}

#[test]
fn bbht_cost_scales_with_solution_density() {
    for n in [256usize, 1024] {
        let (_, one) = bbht_stats(&single_target_table(n, 1), 5, 1000, Backend::Classes);
        let (_, two) = bbht_stats(&single_target_table(n, 2), 6, 1000, Backend::Classes);
        let factor = one / two;
        assert!((1.2..=1.7).contains(&factor), "n' = {n}: {one} / {two} = {factor}");
    }
}

#[test]
fn backends_agree_statistically() {
    let table = single_target_table(256, 1);
    let (dense_rate, dense_mean) = bbht_stats(&table, 9, 600, Backend::Dense);
    let (class_rate, class_mean) = bbht_stats(&table, 9, 600, Backend::Classes);
    assert!(dense_rate >= 0.95 && class_rate >= 0.95);
    assert!((dense_mean - class_mean).abs() < 3.0, "{dense_mean} vs {class_mean}");
}

#[test]
fn positions_at_matches_brute_scan() {
    let (db, q, mode) = random_instance(4242);
    let table = hamming_table(&db, &q, mode).unwrap();
    for d in 0..=table.max_distance() {
        assert_eq!(table.positions_at(d), brute_positions_at(&table, d));
    }
}
