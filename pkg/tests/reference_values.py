"""Pinned reference scalars for the test suite.

Generated by tests/oracle_reference.py (50-digit closed-form Boltzmann sums,
rounded to binary64). Regenerate by running that script; do not edit by hand.
"""

GIBBS_P_HALF_J01_0 = 1.1241352518963534e-07
GIBBS_P_HALF_J01_1 = 0.00033509999576555996
GIBBS_P_HALF_J01_2 = 0.9989190088349953
GIBBS_P_HALF_J01_3 = 0.0007457787557139063
CYCLE_W_S1_J01 = 0.002748484916949905
CYCLE_ETA_S1_J01 = 0.28218051331767047
CYCLE_PS_S1_J01 = -0.0015672176372744607
LOCAL_WA_S1_J4 = -0.0002194706372428479
LOCAL_WB_S1_J4 = 0.0008778825489713662
LOCAL_W_S1_J4 = 0.0006584119117285182
TEMP_A_HOT_S1_J01 = 1.1322551138557349
TEMP_A_COLD_S1_J01 = 0.6023414237706219
TEMP_A_HOT_S1_J4 = -11.549941555296373
TEMP_A_COLD_S1_J4 = -8.656285341337213
COV_HALF_J02 = -0.0006626067332660397
COOPJ_W_S1 = -0.02910526354178763
COOPJ_PS_S1 = -0.018190789713617272
COOPJ_WCOOP_S1 = -0.012635994627347104
COOPJ_RATIO_S1 = 1.7672468458067168
COOP_HALF_W = 0.0026111261178942643
COOP_HALF_WA_SIMPLE = 0.0019566887258655194
COOP_HALF_WB_SIMPLE = 0.0019566887258655194
COOP_HALF_PS = -0.0016278141672959677
COOP_HALF_WA_MF = 0.0015657481571169087
COOP_HALF_WB_MF = 0.0015657481571169087
COOP_HALF_WCOOP = -0.0005203701963395528
COOP_HALF_COV1 = -0.0006626067332660397
COOP_HALF_COV2 = -1.2143987841598586e-05
COOP_HALF_RATIO = 0.8338269810587748
