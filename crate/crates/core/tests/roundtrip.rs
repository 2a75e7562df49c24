use dnavlc::builders::Code;
use dnavlc::jpeg::pairs;
use dnavlc::nucleotide::{read_fasta, write_fasta, FastaRecord};
use dnavlc::transcode::{decode_message, encode_message, goldman_decode, goldman_encode};
use dnavlc::{BuilderKind, Codebook, FrequencyTable, NucleotideStream, Symbol};
use proptest::prelude::*;

const NUCLEOTIDE_CODERS: [BuilderKind; 5] = [
    BuilderKind::Sfc,
    BuilderKind::Goldman,
    BuilderKind::Huffman3,
    BuilderKind::Huffman4,
    BuilderKind::Huffman4Constrained,
];

/// A table over `alphabet` symbols and a message drawn from its support.
fn table_and_message() -> impl Strategy<Value = (FrequencyTable, Vec<Symbol>)> {
    (1usize..120)
        .prop_flat_map(|alphabet| prop::collection::vec(0u64..50, alphabet))
        .prop_filter("needs a positive count", |c| c.iter().any(|&x| x > 0))
        .prop_flat_map(|counts| {
            let support: Vec<usize> = (0..counts.len()).filter(|&i| counts[i] > 0).collect();
            let msg = prop::collection::vec(prop::sample::select(support), 0..400);
            (Just(FrequencyTable::from_counts(counts)), msg)
        })
        .prop_map(|(t, m)| (t, m.into_iter().map(Symbol).collect()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn messages_survive_every_nucleotide_coder(
        (table, msg) in table_and_message(),
        max_hl in 2usize..6,
        pick in 0usize..5,
    ) {
        let code = Code::build(NUCLEOTIDE_CODERS[pick], &table, max_hl).unwrap();
        let stream = encode_message(&code, &msg).unwrap();
        prop_assert_eq!(decode_message(&code, &stream).unwrap(), msg);
    }

    #[test]
    fn goldman_helpers_roundtrip((table, msg) in table_and_message()) {
        let stream = goldman_encode(&msg, &table).unwrap();
        let code = Code::build(BuilderKind::Goldman, &table, 3).unwrap();
        prop_assert_eq!(goldman_decode(&stream, &code.tree).unwrap(), msg);
        prop_assert!(stream.as_slice().windows(2).all(|w| w[0] != w[1]));
    }

    #[test]
    fn binary_books_roundtrip_bases((table, msg) in table_and_message()) {
        let code = Code::build(BuilderKind::Huffman2, &table, 3).unwrap();
        let bases = code.book.encode(&msg).unwrap();
        prop_assert_eq!(code.book.decode(&bases, &code.tree).unwrap(), msg);
    }

    #[test]
    fn codebook_json_roundtrip((table, _msg) in table_and_message(), pick in 0usize..5) {
        let code = Code::build(NUCLEOTIDE_CODERS[pick], &table, 3).unwrap();
        let json = code.book.to_json().unwrap();
        let back = Codebook::from_json(&json).unwrap();
        prop_assert_eq!(&back, &code.book);
        prop_assert_eq!(back.to_tree().unwrap(), code.tree);
    }

    #[test]
    fn pair_coded_bytes_roundtrip(bytes in prop::collection::vec(any::<u8>(), 0..200)) {
        let s = pairs::encode_bytes(&bytes);
        prop_assert_eq!(pairs::decode_bytes(&s).unwrap(), bytes);
    }

    #[test]
    fn fasta_roundtrip(seqs in prop::collection::vec("[ACGT]{0,300}", 1..4)) {
        let records: Vec<FastaRecord> = seqs
            .iter()
            .enumerate()
            .map(|(i, s)| FastaRecord {
                name: format!("r{i}"),
                meta: serde_json::json!({ "i": i }),
                seq: s.parse::<NucleotideStream>().unwrap(),
            })
            .collect();
        let mut buf = Vec::new();
        write_fasta(&mut buf, &records).unwrap();
        prop_assert_eq!(read_fasta(buf.as_slice()).unwrap(), records);
    }
}

#[test]
fn truncated_streams_report_their_end() {
    let table = FrequencyTable::from_counts((1..=40).collect());
    let msg: Vec<Symbol> = (0..40).rev().map(Symbol).collect();
    for kind in NUCLEOTIDE_CODERS {
        let code = Code::build(kind, &table, 3).unwrap();
        let stream = encode_message(&code, &msg).unwrap();
        let last = code.book.codeword(Symbol(0)).unwrap().len();
        if last < 2 {
            continue;
        }
        let cut: NucleotideStream = stream.as_slice()[..stream.len() - 1].to_vec().into();
        match decode_message(&code, &cut) {
            Err(dnavlc::Error::Desync { offset, .. }) => assert_eq!(offset, cut.len(), "{kind}"),
            other => panic!("{kind}: expected desync, got {other:?}"),
        }
    }
}
