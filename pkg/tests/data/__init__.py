import os

DATA_DIR = os.path.dirname(__file__)

fig1_config = os.path.join(DATA_DIR, "fig1.cfg")
fig1_n40_config = os.path.join(DATA_DIR, "fig1_n40.cfg")
two_user_config = os.path.join(DATA_DIR, "two_user.cfg")
bad_config = os.path.join(DATA_DIR, "bad.cfg")
