//! Domain-independent resources shared by every feature extraction.

use std::fs::File;
use std::io::BufReader;
use std::path::Path;

use crate::error::{Error, Result};
use crate::lexicon::{load_sentiment_lexicon, SentimentLexicon};
use crate::textproc::{EasyWords, EmoticonCatalogs};

#[derive(Clone, Debug, Default)]
pub struct SharedResources {
    pub sentiment: SentimentLexicon,
    pub catalogs: EmoticonCatalogs,
    pub easy_words: EasyWords,
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path).map(BufReader::new).map_err(|e| Error::io(path, e))
}

impl SharedResources {
    /// Bundled sample sentiment lexicon, emoticon catalogs and easy-word list.
    pub fn bundled() -> Self {
        SharedResources {
            sentiment: SentimentLexicon::bundled_sample(),
            catalogs: EmoticonCatalogs::bundled(),
            easy_words: EasyWords::bundled(),
        }
    }

    /// Loads each resource from its path, falling back to the bundled copy
    /// when the path is `None`. Emoticon catalog paths are merged in order.
    pub fn load(sentiment: Option<&Path>, catalogs: &[&Path], easy_words: Option<&Path>) -> Result<Self> {
        let sentiment = match sentiment {
            Some(p) => load_sentiment_lexicon(open(p)?)?.0,
            None => SentimentLexicon::bundled_sample(),
        };
        let catalogs = if catalogs.is_empty() {
            EmoticonCatalogs::bundled()
        } else {
            let mut c = EmoticonCatalogs::new();
            for p in catalogs {
                c.extend_from_reader(open(p)?).map_err(|e| Error::io(*p, e))?;
            }
            c
        };
        let easy_words = match easy_words {
            Some(p) => EasyWords::from_reader(open(p)?).map_err(|e| Error::io(p, e))?,
            None => EasyWords::bundled(),
        };
        Ok(SharedResources {
            sentiment,
            catalogs,
            easy_words,
        })
    }
}
