"""End to end through files: write a corpus and lexicon, load them back,
build gold and lexicon arcs, save them, and score the pair.

    python demos/file_pipeline.py [OUTDIR]
"""

import sys
import tempfile
from pathlib import Path

from emoarc import (
    ArcConfig,
    ColumnMapping,
    LabelScheme,
    SynthSpec,
    evaluate_pair,
    gold_arc,
    load_corpus,
    load_lexicon,
    predicted_arc,
    read_arc,
    standardize,
    write_arc,
)
from emoarc.synthgen import write_synthetic

out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(tempfile.mkdtemp(prefix="emoarc-"))
out.mkdir(parents=True, exist_ok=True)

spec = SynthSpec(n_instances=3000, seed=7)
corpus_path, lexicon_path = write_synthetic(spec, out / "corpus.tsv", out / "lexicon.tsv")

corpus = load_corpus(corpus_path, ColumnMapping(id="id"), LabelScheme.parse("categorical:-3..3"))
lexicon = load_lexicon(lexicon_path)
config = ArcConfig(bin_size=100, oov_policy="zero")

gold = write_arc(standardize(gold_arc(corpus, config)), out / "gold.csv")
pred = write_arc(standardize(predicted_arc(corpus, lexicon, config)), out / "lexo.csv")

report = evaluate_pair(read_arc(gold), read_arc(pred))
print(f"wrote {out}")
print(f"{report.n_windows} windows, rho {report.rho:.6f}")
# The same run from the shell:
#   emoarc gold --corpus corpus.tsv --id-col id --scheme categorical:-3..3 --bin 100 --out gold.csv
#   emoarc lexo --corpus corpus.tsv --id-col id --scheme categorical:-3..3 \
#       --lexicon lexicon.tsv --bin 100 --oov zero --out lexo.csv
#   emoarc eval --gold gold.csv --pred lexo.csv
