import sys

# the prover raises the interpreter recursion limit on demand when a budget
# calls for deep branches; pin it once so no test trips the limit mid-run
sys.setrecursionlimit(30000)
