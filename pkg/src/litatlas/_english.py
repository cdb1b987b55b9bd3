"""Built-in English function words.

Shared by language detection (hit-rate scoring) and the stoplist base set.
Entries are lowercase, letters only, length >= 2, so every entry is a
possible output of the tokenizer. Single-letter words ("a", "i") are
omitted because the tokenizer drops tokens shorter than two characters.
"""

FUNCTION_WORDS = frozenset("""
about above across after again against all almost alone along already also
although always am among an and another any anyone anything are around as at
away back be became because become becomes been before being below besides
between beyond both but by came can cannot could did do does doing done down
during each either else enough even ever every everyone everything few for
from further gave get gets give given goes got had has have having he her
here hers herself him himself his how however if in indeed instead into is
it its itself just keep kept last later least less let like made make many
may maybe me meanwhile might mine more moreover most much must my myself
namely neither never nevertheless next no nobody none nor not nothing now
of off often on once one only onto or other others otherwise our ours
ourselves out over own per perhaps put rather said same say see seem seemed
seeming seems several shall she should since so some somehow someone
something sometime sometimes somewhere still such take taken than that the
their theirs them themselves then there thereafter thereby therefore therein
these they this those though through throughout thus to together too toward
towards under until up upon us used using very was we well were what whatever
when whenever where whereas wherever whether which while who whoever whole
whom whose why will with within without would yet you your yours yourself
yourselves
aren isn wasn weren hasn haven hadn doesn don didn won wouldn shouldn
couldn mustn ve ll re
""".split())

# Dataset-boilerplate stopwords shipped as the default domain list; a user
# file replaces these entirely.
DEFAULT_DOMAIN_STOPWORDS = frozenset(
    ["doi", "fig", "medrxiv", "preprint", "copyright", "license", "et", "al"]
)
