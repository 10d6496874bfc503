// Tokens, markers, emoticons and readability counts for a few messages.

use actionable::textproc::{
    detect_emoticons, extract_markers, readability_counts, tokenize, EasyWords, EmoticonCatalogs,
};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let catalogs = EmoticonCatalogs::bundled();
    let easy = EasyWords::bundled();
    let messages = [
        "@nokia my phone won't charge?! #help http://t.co/x1",
        "RT great launch today via @nokianews :)",
        "Aucun réseau depuis hier 😡 (T_T)",
    ];
    for text in messages {
        let doc = tokenize(text);
        println!("{text}");
        println!("  tokens   {:?}", doc.tokens);
        for m in extract_markers(text) {
            println!("  marker   {} #{} at char {}", m.marker.symbol(), m.ordinal, m.char_index);
        }
        for hit in detect_emoticons(text, &catalogs) {
            println!("  emoticon {} {:?} {:?}", hit.surface, hit.kind, hit.polarity);
        }
        let r = readability_counts(text, &easy);
        println!(
            "  counts   sentences={} words={} difficult={} syllables={}",
            r.sentences, r.words, r.difficult_words, r.syllables
        );
        assert_eq!(doc.word_count, doc.tokens.len());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
