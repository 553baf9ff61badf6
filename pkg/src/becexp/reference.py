"""Tabulated reference thresholds for two standard regular ensembles.

Regression anchors, quoted to 10 decimals.  The computed operations
(find_p_d, find_p_c, find_p_1rsb) reproduce the p_1rsb/p_d/p_c columns;
p_rs and p_e document the energetic quantities outside this library's
scope and are kept for orientation only.
"""

REFERENCE_THRESHOLDS = {
    (3, 6): {
        "p_1rsb": 0.2668568754,
        "p_rs": 0.3378374641,
        "p_e": 0.3491884902,
        "p_d": 0.4294398144,
        "p_c": 0.4881508842,
    },
    (3, 4): {
        "p_1rsb": 0.3252629709,
        "p_rs": 0.5465748811,
        "p_e": 0.6068720166,
        "p_d": 0.6474256494,
        "p_c": 0.7460097025,
    },
}
