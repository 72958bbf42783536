"""Bundled English stopword list (175 words).

Technical corpora often need domain-specific additions (machine names,
boilerplate field markers); pass a custom set to the vectorizer config to
override rather than editing this list.
"""

ENGLISH_STOPWORDS = frozenset((
    "a", "about", "above", "after", "again", "against", "all", "also",
    "am", "an", "and", "any", "are", "as", "at", "be",
    "because", "been", "before", "being", "below", "between", "both", "but",
    "by", "can", "cannot", "could", "did", "do", "does", "doing",
    "done", "down", "during", "each", "few", "for", "from", "had",
    "has", "have", "having", "he", "her", "here", "hers", "herself",
    "him", "himself", "his", "how", "i", "if", "in", "instead",
    "into", "is", "it", "its", "itself", "just", "like", "made",
    "make", "making", "many", "may", "me", "might", "more", "most",
    "much", "must", "my", "myself", "near", "never", "next", "no",
    "nor", "not", "nothing", "now", "of", "off", "often", "on",
    "once", "only", "onto", "or", "other", "our", "ours", "ourselves",
    "out", "over", "own", "per", "perhaps", "put", "rather", "really",
    "said", "same", "say", "says", "see", "seen", "shall", "she",
    "should", "since", "so", "some", "still", "such", "take", "taken",
    "than", "that", "the", "their", "theirs", "them", "themselves", "then",
    "there", "these", "they", "this", "those", "though", "through", "thus",
    "till", "to", "too", "toward", "under", "until", "up", "upon",
    "us", "use", "used", "using", "very", "want", "was", "we",
    "well", "went", "were", "what", "when", "where", "whether", "which",
    "while", "who", "whom", "why", "will", "with", "within", "without",
    "would", "yet", "you", "your", "yours", "yourself", "yourselves",
))
