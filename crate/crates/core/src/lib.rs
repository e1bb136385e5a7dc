pub mod kernel;
pub mod parser;
pub mod corpus;
pub mod oracle;
pub mod export;
pub mod cli;
