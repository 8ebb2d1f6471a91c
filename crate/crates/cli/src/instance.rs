use anyhow::{bail, Context, Result};
use std::collections::BTreeSet;
use std::fs;

use qalign::seqdb::read_records;
use qalign::{hamming_table, load_fasta, Alphabet, HammingMode, HammingTable, QuerySequence};

use crate::args::InstanceArgs;

/// A resolved search problem: the distance table plus the windows that
/// must never be reported.
pub struct Instance {
    pub table: HammingTable,
    pub excluded: BTreeSet<usize>,
    pub description: String,
}

impl Instance {
    pub fn load(args: &InstanceArgs) -> Result<Self> {
        if let Some(spec) = &args.synthetic {
            return synthetic(spec);
        }
        let alphabet: Alphabet = args.alphabet.into();
        let mode: HammingMode = args.mode.into();
        let db_path = args.db.as_ref().context("--db is required")?;
        let db = load_fasta(db_path, alphabet)
            .with_context(|| format!("reading database {}", db_path.display()))?;
        let query = load_query(args, alphabet)?;
        let table = hamming_table(&db, &query, mode)?;
        let excluded = if args.no_domain_crossing {
            db.crossing_windows(query.len())
        } else {
            BTreeSet::new()
        };
        Ok(Self {
            description: format!(
                "{} residues in {} domain(s), query length {}, {alphabet}, {mode}-level distance",
                db.len(),
                db.domain_offsets().len(),
                query.len()
            ),
            table,
            excluded,
        })
    }

    /// The windows that count as answers at distance `n`.
    pub fn eligible_at(&self, n: u32) -> Vec<usize> {
        self.table
            .positions_at(n)
            .into_iter()
            .filter(|i| !self.excluded.contains(i))
            .collect()
    }

    /// Smallest distance over eligible windows.
    pub fn eligible_min(&self) -> Option<u32> {
        self.table
            .values()
            .iter()
            .enumerate()
            .filter(|(i, _)| !self.excluded.contains(i))
            .map(|(_, &v)| v)
            .min()
    }

    /// Re-checks a reported hit against the table before it is printed.
    pub fn verify(&self, position: usize, distance: u32) -> Result<()> {
        if self.table.get(position) != Some(distance) || self.excluded.contains(&position) {
            bail!("internal error: position {position} does not verify at distance {distance}");
        }
        Ok(())
    }
}

fn load_query(args: &InstanceArgs, alphabet: Alphabet) -> Result<QuerySequence> {
    if let Some(text) = &args.query {
        return Ok(QuerySequence::parse(alphabet, text)?);
    }
    let path = args
        .query_file
        .as_ref()
        .context("either --query or --query-file is required")?;
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading query {}", path.display()))?;
    if text.trim_start().starts_with('>') {
        let records = read_records(text.as_bytes(), alphabet)?;
        Ok(QuerySequence::new(alphabet, records[0].residues.clone())?)
    } else {
        Ok(QuerySequence::parse(alphabet, &text)?)
    }
}

/// `N_PRIME:N_TARGETS`: distance 0 at `N_TARGETS` evenly spread windows,
/// distance 1 everywhere else.
fn synthetic(spec: &str) -> Result<Instance> {
    let (n, t) = spec
        .split_once(':')
        .context("--synthetic expects N_PRIME:N_TARGETS")?;
    let n_prime: usize = n.trim().parse().context("bad N_PRIME")?;
    let targets: usize = t.trim().parse().context("bad N_TARGETS")?;
    if n_prime == 0 || targets > n_prime {
        bail!("--synthetic needs 0 <= N_TARGETS <= N_PRIME and N_PRIME >= 1");
    }
    let mut values = vec![1u32; n_prime];
    for j in 0..targets {
        values[j * n_prime / targets] = 0;
    }
    Ok(Instance {
        table: HammingTable::from_values(values, HammingMode::Residue, Alphabet::Dna, 1)?,
        excluded: BTreeSet::new(),
        description: format!("synthetic: {n_prime} windows, {targets} at distance 0"),
    })
}
