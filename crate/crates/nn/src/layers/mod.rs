pub mod conv;
pub mod dense;
pub mod dropout;
pub mod gru;
pub mod lstm;
pub mod rnn;
pub mod shape;

pub use conv::{conv_output_len, Conv1d, Conv1dCache};
pub use dense::{Dense, DenseCache};
pub use dropout::{Dropout, DropoutCache};
pub use gru::{gru_cell_forward, Gru, GruCache, GruCellParams};
pub use lstm::{lstm_cell_forward, Lstm, LstmCache, LstmCellParams};
pub use rnn::{rnn_cell_forward, Rnn, RnnCache, RnnCellParams, RnnOutputMap};
pub use shape::{flatten, to_steps, to_steps_backward};
