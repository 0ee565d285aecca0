# Repository root on sys.path so tests import src.<module> like main.py does
import os
import sys

sys.path.insert(0, os.path.dirname(__file__))
