"""turkpos: Turkish part-of-speech tagging.

A from-scratch bidirectional-LSTM tagger (embedding, LSTM cells in both
time directions, softmax output, full backpropagation through time), a
trigram-HMM bootstrap labeler with Viterbi decoding, a Turkish-aware text
normalization pipeline, and an HTTP platform where humans review tags,
submit corrections, and corrections feed retraining.
"""

__version__ = "0.1.0"
