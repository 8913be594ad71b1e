"""
A tour of the evaluation metrics
=================================

Runs each of the six scores on small clinical snippets and shows the
tokenization conventions behind them: EM/F1/ROUGE share a normalizing
tokenizer (lowercase, punctuation stripped, articles removed) while
BLEU scores raw whitespace tokens.

Run with:  python demos/03_metrics_tour.py
"""

from ehrsum.metrics import (
    aggregate_corpus,
    bleu,
    exact_match,
    lcs_length,
    normalize_text,
    rouge_l,
    rouge_n,
    token_f1,
    tokenize,
)

# --- normalization ------------------------------------------------------
print("normalize_text('The Cat.')          ->", repr(normalize_text("The Cat.")))
print("normalize_text('gram-positive  cocci') ->", repr(normalize_text("gram-positive  cocci")))
print("tokenize('the cat sat')             ->", tokenize("the cat sat"))
print()

# --- exact match: normalization forgives case, punctuation, articles ----
gold = "concern for seizures"
print(f"EM('The concern for seizures.', [{gold!r}]) =",
      exact_match("The concern for seizures.", [gold]))
print()

# --- token F1: partial credit for overlapping content -------------------
pred = "volume depletion caused by diarrhea"
gold = "volume depletion"
print(f"pred: {pred!r}")
print(f"gold: {gold!r}")
print(f"F1 = {token_f1(pred, [gold]):.4f}  (precision 2/5, recall 1, harmonic mean 4/7)")
print()

# --- ROUGE: unigram/bigram overlap and longest common subsequence -------
print("ROUGE-1('cat sat', 'cat sat down') =", rouge_n("cat sat", "cat sat down", 1))
print("ROUGE-2 on word-order slip:",
      f"{rouge_n('patient denies chest pain', 'patient denies any chest pain', 2):.4f}")
print("LCS(['w','x','y','z'], ['w','y','x','z']) =",
      lcs_length(["w", "x", "y", "z"], ["w", "y", "x", "z"]))
print("ROUGE-L('no acute distress noted', 'no acute distress') =",
      f"{rouge_l('no acute distress noted', 'no acute distress'):.4f}")
print()

# --- BLEU: corpus-level clipped n-gram precision with brevity penalty ---
value = bleu(["the cat sat on mat"], ["the cat sat on the mat"])
print(f"BLEU('the cat sat on mat' vs 'the cat sat on the mat') = {value:.4f}")
print("  p1=1, p2=3/4, p3=2/3, p4=1/2, brevity penalty exp(1 - 6/5)")
print()

# --- corpus aggregation --------------------------------------------------
pairs = [
    ("gram-positive cocci in her sputum culture",
     ["gram-positive cocci in her sputum culture"]),
    ("some concern her nausea", ["some concern her nausea"]),
    ("fluid overload", ["volume depletion caused by diarrhea"]),
]
scores = aggregate_corpus(pairs)
print("corpus over three pairs (two perfect, one off):")
for name, value in scores.as_dict().items():
    print(f"  {name:<12} {value:.4f}")
